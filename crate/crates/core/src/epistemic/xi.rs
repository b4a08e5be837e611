//! The global random variable ξ.
//!
//! ξ is spatially uniform, shared simultaneously by every degree of freedom,
//! and carries only two fixed moments: mean 0 and variance ħ². The law behind
//! those moments is otherwise free; both supported choices reproduce the same
//! ensemble averages, and the crate's tests exploit that to check
//! moment-sufficiency.

use rand::Rng;

use crate::error::{Result, SimError};
use crate::rng::{substream, BATCH};
use crate::scalar::Real;

/// Distribution family for ξ.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum XiLaw {
    /// ±ħ with equal probability: both moments exact per draw.
    TwoPoint,
    /// Normal with standard deviation ħ.
    Gaussian,
}

/// Distribution law μ(ξ), parameterized by ħ, plus the stream seed.
#[derive(Clone, Debug, PartialEq)]
pub struct XiModel<T> {
    hbar: T,
    law: XiLaw,
    seed: u64,
}

impl<T: Real> XiModel<T> {
    pub fn new(hbar: T, law: XiLaw, seed: u64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > T::zero()) {
            return Err(SimError::Config("hbar must be positive and finite".into()));
        }
        Ok(Self { hbar, law, seed })
    }

    pub fn two_point(hbar: T, seed: u64) -> Result<Self> {
        Self::new(hbar, XiLaw::TwoPoint, seed)
    }

    pub fn gaussian(hbar: T, seed: u64) -> Result<Self> {
        Self::new(hbar, XiLaw::Gaussian, seed)
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    pub fn law(&self) -> XiLaw {
        self.law
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn with_law(&self, law: XiLaw) -> Self {
        Self { law, ..self.clone() }
    }

    /// One draw from μ(ξ).
    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match self.law {
            XiLaw::TwoPoint => {
                if rng.random::<bool>() {
                    self.hbar
                } else {
                    -self.hbar
                }
            }
            XiLaw::Gaussian => T::std_normal(rng) * self.hbar,
        }
    }

    /// `n` i.i.d. draws, deterministic given the seed and independent of how
    /// callers partition work (one substream per batch of [`BATCH`] draws).
    pub fn sample_xi(&self, n: usize) -> Vec<T> {
        let mut out = Vec::with_capacity(n);
        let batches = n.div_ceil(BATCH);
        for b in 0..batches {
            let mut rng = substream(self.seed, b as u64);
            let take = BATCH.min(n - b * BATCH);
            for _ in 0..take {
                out.push(self.draw(&mut rng));
            }
        }
        out
    }
}
