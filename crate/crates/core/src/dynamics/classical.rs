//! Classical Hamilton–Jacobi flow by the method of characteristics.
//!
//! Trajectories are sampled from ρ₀ with p₀ = ∇S₀, integrated under Hamilton's
//! equations (RK4), carrying the action along `dS/dt = p·q̇ − H`. The variation
//! matrix δq(t)/δq₀ rides along each trajectory; a sign change of its
//! determinant means characteristics crossed (S turns multivalued) and the run
//! aborts with a caustic error. Fields are re-deposited on the grid by
//! cloud-in-cell weighting, which conserves the sampled probability exactly.

use crate::epistemic::{CellSampler, EpistemicState, StateKind};
use crate::error::{Result, SimError};
use crate::fields::{Boundary, DiffOrder, Grid, ScalarField};
use crate::numeric::Accum;
use crate::rng::{substream, BATCH};
use crate::scalar::Real;

use super::hamiltonian::Hamiltonian;
use super::report::{EvolutionMethod, EvolutionReport};

/// One characteristic at the end of a run.
#[derive(Clone, Debug)]
pub struct Trajectory<T> {
    pub q: Vec<T>,
    pub p: Vec<T>,
    pub action: T,
}

/// Result of a characteristics run.
#[derive(Clone, Debug)]
pub struct ClassicalEvolution<T> {
    pub state: EpistemicState<T>,
    pub trajectories: Vec<Trajectory<T>>,
    pub report: EvolutionReport<T>,
}

struct Particle<T> {
    q: Vec<T>,
    p: Vec<T>,
    s: T,
    /// Variation blocks δq/δq₀ and δp/δq₀, row-major N×N.
    dq: Vec<T>,
    dp: Vec<T>,
    alive: bool,
}

/// Evolve by characteristics; deposit (ρ, S) on the grid at `t_final`.
pub fn evolve_classical_hj<T: Real>(
    state0: &EpistemicState<T>,
    h: &Hamiltonian<T>,
    dt: T,
    t_final: T,
    n_traj: usize,
    seed: u64,
) -> Result<ClassicalEvolution<T>> {
    let grid = state0.grid().clone();
    let dims = grid.dims();
    if h.dims() != dims {
        return Err(SimError::Config("Hamiltonian dimensionality does not match the grid".into()));
    }
    if !(dt > T::zero() && t_final >= T::zero()) || n_traj == 0 {
        return Err(SimError::Config("need dt > 0, t_final >= 0, n_traj > 0".into()));
    }
    let steps = (t_final / dt).to64().ceil().max(1.0) as usize;
    let dt = t_final / T::of(steps as f64);

    // Force and Hessian fields of the potential (zero when V ≡ const).
    let (force, hess): (Option<Vec<ScalarField<T>>>, Option<Vec<ScalarField<T>>>) =
        match h.potential() {
            crate::expectation::Coeff::Const(_) => (None, None),
            crate::expectation::Coeff::Field(v) => {
                let mut f = Vec::with_capacity(dims);
                let mut hs = Vec::with_capacity(dims * dims);
                for a in 0..dims {
                    f.push(v.derivative(a, 1, DiffOrder::Four)?.scale(-T::one()));
                }
                for a in 0..dims {
                    for b in 0..dims {
                        hs.push(v.laplacian_like_order(a, b, DiffOrder::Four)?);
                    }
                }
                (Some(f), Some(hs))
            }
        };

    // Initial momentum field ∇S₀ and its Jacobian for the variation blocks.
    let mut grad_s = Vec::with_capacity(dims);
    for a in 0..dims {
        grad_s.push(state0.phase_gradient(a, DiffOrder::Four)?);
    }
    let mut hess_s = Vec::with_capacity(dims * dims);
    for a in 0..dims {
        for b in 0..dims {
            hess_s.push(state0.phase().laplacian_like_order(a, b, DiffOrder::Four)?);
        }
    }

    let sampler = CellSampler::new(state0.rho())?;
    let mut particles: Vec<Particle<T>> = Vec::with_capacity(n_traj);
    let batches = n_traj.div_ceil(BATCH);
    for b in 0..batches {
        let mut rng = substream(seed, b as u64);
        let take = BATCH.min(n_traj - b * BATCH);
        for _ in 0..take {
            let mut q = vec![T::zero(); dims];
            sampler.sample_into(&mut rng, &mut q);
            let mut p = vec![T::zero(); dims];
            let mut dp = vec![T::zero(); dims * dims];
            for a in 0..dims {
                p[a] = grad_s[a].interpolate(&q)?;
                for c in 0..dims {
                    dp[a * dims + c] = hess_s[a * dims + c].interpolate(&q)?;
                }
            }
            let mut dq = vec![T::zero(); dims * dims];
            for a in 0..dims {
                dq[a * dims + a] = T::one();
            }
            let s = state0.phase().interpolate(&q)?;
            particles.push(Particle { q, p, s, dq, dp, alive: true });
        }
    }

    let mut report = EvolutionReport::new(EvolutionMethod::ClassicalHj);
    let diag = |particles: &[Particle<T>], report: &mut EvolutionReport<T>, t: T| -> Result<()> {
        let mut e = Accum::new();
        let mut alive = 0usize;
        for part in particles.iter().filter(|p| p.alive) {
            e.add(h.evaluate(&part.q, &part.p)?);
            alive += 1;
        }
        let mean_e = if alive > 0 { e.value() / T::of(alive as f64) } else { T::zero() };
        report.push(t, T::of(alive as f64) / T::of(n_traj as f64) - T::one(), mean_e);
        Ok(())
    };
    diag(&particles, &mut report, T::zero())?;

    for step in 1..=steps {
        let t = dt * T::of(step as f64);
        for part in particles.iter_mut().filter(|p| p.alive) {
            if !rk4_particle(part, h, force.as_deref(), hess.as_deref(), &grid, dt)? {
                part.alive = false;
                continue;
            }
            if det(&part.dq, dims) <= T::zero() {
                return Err(SimError::Caustic { t: t.to64() });
            }
        }
        diag(&particles, &mut report, t)?;
    }

    // Deposit ρ and S.
    let (rho, phase) = deposit(&grid, &particles)?;
    let state = EpistemicState::new_unchecked(rho, phase, StateKind::Classical, state0.hbar());
    let trajectories = particles
        .into_iter()
        .filter(|p| p.alive)
        .map(|p| Trajectory { q: p.q, p: p.p, action: p.s })
        .collect();
    Ok(ClassicalEvolution { state, trajectories, report })
}

/// One RK4 step of (q, p, S, δq, δp); returns false if the trajectory left a
/// vanishing domain (it is then dropped from the ensemble).
fn rk4_particle<T: Real>(
    part: &mut Particle<T>,
    h: &Hamiltonian<T>,
    force: Option<&[ScalarField<T>]>,
    hess: Option<&[ScalarField<T>]>,
    grid: &Grid<T>,
    dt: T,
) -> Result<bool> {
    let dims = part.q.len();
    let nn = dims * dims;
    // State vector layout: q, p, S, δq, δp.
    let len = 2 * dims + 1 + 2 * nn;
    let mut y = Vec::with_capacity(len);
    y.extend_from_slice(&part.q);
    y.extend_from_slice(&part.p);
    y.push(part.s);
    y.extend_from_slice(&part.dq);
    y.extend_from_slice(&part.dp);

    let deriv = |y: &[T], out: &mut Vec<T>| -> Result<bool> {
        out.clear();
        let q = &y[..dims];
        let p = &y[dims..2 * dims];
        let dq = &y[2 * dims + 1..2 * dims + 1 + nn];
        let dp = &y[2 * dims + 1 + nn..];
        let mut qw = vec![T::zero(); dims];
        // Wrap periodic axes before interpolating; bail out on vanishing exit.
        for a in 0..dims {
            let ax = &grid.axes()[a];
            qw[a] = match ax.boundary {
                Boundary::Periodic => {
                    let span = ax.extent();
                    let rel = (q[a] - ax.lower) / span;
                    ax.lower + (rel - rel.floor()) * span
                }
                Boundary::Vanishing => {
                    if q[a] < ax.lower || q[a] > ax.upper {
                        return Ok(false);
                    }
                    q[a]
                }
            };
        }
        // q̇ = (p − A)/m.
        let mut lagrangian = -h.potential().eval(&qw)?;
        for a in 0..dims {
            let v = (p[a] - h.gauge()[a]) / h.masses()[a];
            out.push(v);
            lagrangian += p[a] * v - (p[a] - h.gauge()[a]) * (p[a] - h.gauge()[a])
                / (T::of(2.0) * h.masses()[a]);
        }
        // ṗ = −∇V.
        for a in 0..dims {
            out.push(match force {
                Some(f) => f[a].interpolate(&qw)?,
                None => T::zero(),
            });
        }
        // Ṡ = p·q̇ − H.
        out.push(lagrangian);
        // δq̇ = δp/m (row a of δq varies q_a).
        for a in 0..dims {
            for c in 0..dims {
                out.push(dp[a * dims + c] / h.masses()[a]);
            }
        }
        // δṗ = −Hess V · δq.
        for a in 0..dims {
            for c in 0..dims {
                let mut v = T::zero();
                if let Some(hs) = hess {
                    for b in 0..dims {
                        v -= hs[a * dims + b].interpolate(&qw)? * dq[b * dims + c];
                    }
                }
                out.push(v);
            }
        }
        Ok(true)
    };

    let mut k1 = Vec::new();
    let mut k2 = Vec::new();
    let mut k3 = Vec::new();
    let mut k4 = Vec::new();
    let mut tmp = vec![T::zero(); len];
    if !deriv(&y, &mut k1)? {
        return Ok(false);
    }
    let half = dt * T::of(0.5);
    for i in 0..len {
        tmp[i] = y[i] + half * k1[i];
    }
    if !deriv(&tmp, &mut k2)? {
        return Ok(false);
    }
    for i in 0..len {
        tmp[i] = y[i] + half * k2[i];
    }
    if !deriv(&tmp, &mut k3)? {
        return Ok(false);
    }
    for i in 0..len {
        tmp[i] = y[i] + dt * k3[i];
    }
    if !deriv(&tmp, &mut k4)? {
        return Ok(false);
    }
    let sixth = dt / T::of(6.0);
    for i in 0..len {
        y[i] += sixth * (k1[i] + T::of(2.0) * (k2[i] + k3[i]) + k4[i]);
    }

    part.q.copy_from_slice(&y[..dims]);
    part.p.copy_from_slice(&y[dims..2 * dims]);
    part.s = y[2 * dims];
    part.dq.copy_from_slice(&y[2 * dims + 1..2 * dims + 1 + nn]);
    part.dp.copy_from_slice(&y[2 * dims + 1 + nn..]);
    // Keep periodic coordinates wrapped.
    for a in 0..dims {
        let ax = &grid.axes()[a];
        if ax.boundary == Boundary::Periodic {
            let span = ax.extent();
            let rel = (part.q[a] - ax.lower) / span;
            part.q[a] = ax.lower + (rel - rel.floor()) * span;
        } else if part.q[a] < ax.lower || part.q[a] > ax.upper {
            return Ok(false);
        }
    }
    Ok(true)
}

fn det<T: Real>(m: &[T], n: usize) -> T {
    match n {
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        3 => {
            m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
                + m[2] * (m[3] * m[7] - m[4] * m[6])
        }
        _ => {
            // Gaussian elimination for larger blocks.
            let mut a: Vec<f64> = m.iter().map(|v| v.to64()).collect();
            let mut d = 1.0f64;
            for c in 0..n {
                let mut piv = c;
                for r in c + 1..n {
                    if a[r * n + c].abs() > a[piv * n + c].abs() {
                        piv = r;
                    }
                }
                if a[piv * n + c] == 0.0 {
                    return T::zero();
                }
                if piv != c {
                    for k in 0..n {
                        a.swap(c * n + k, piv * n + k);
                    }
                    d = -d;
                }
                d *= a[c * n + c];
                for r in c + 1..n {
                    let f = a[r * n + c] / a[c * n + c];
                    for k in c..n {
                        a[r * n + k] -= f * a[c * n + k];
                    }
                }
            }
            T::of(d)
        }
    }
}

/// Cloud-in-cell deposit of density and (weight-averaged) action.
fn deposit<T: Real>(
    grid: &Grid<T>,
    particles: &[Particle<T>],
) -> Result<(ScalarField<T>, ScalarField<T>)> {
    let n = grid.len();
    let dims = grid.dims();
    let mut mass = vec![T::zero(); n];
    let mut action = vec![T::zero(); n];
    let total = particles.iter().filter(|p| p.alive).count().max(1);
    let w0 = T::of(1.0 / total as f64);
    for part in particles.iter().filter(|p| p.alive) {
        // Locate the cell pair per axis, clamping at vanishing edges.
        let mut base = vec![0usize; dims];
        let mut next = vec![0usize; dims];
        let mut frac = vec![T::zero(); dims];
        for a in 0..dims {
            let ax = &grid.axes()[a];
            let u = (part.q[a] - ax.lower) / ax.step() - T::of(0.5);
            match ax.boundary {
                Boundary::Periodic => {
                    let np = ax.points as f64;
                    let uw = u.to64().rem_euclid(np);
                    let b = uw.floor() as usize % ax.points;
                    base[a] = b;
                    next[a] = (b + 1) % ax.points;
                    frac[a] = T::of(uw - uw.floor());
                }
                Boundary::Vanishing => {
                    let mut b = u.to64().floor() as isize;
                    let mut f = u - T::of(u.to64().floor());
                    if b < 0 {
                        b = 0;
                        f = T::zero();
                    }
                    if b as usize >= ax.points - 1 {
                        b = ax.points as isize - 2;
                        f = T::one();
                    }
                    base[a] = b as usize;
                    next[a] = b as usize + 1;
                    frac[a] = f;
                }
            }
        }
        for corner in 0..(1usize << dims) {
            let mut w = w0;
            let mut flat = 0usize;
            for a in 0..dims {
                let hi = (corner >> a) & 1 == 1;
                w *= if hi { frac[a] } else { T::one() - frac[a] };
                flat += grid.stride(a) * if hi { next[a] } else { base[a] };
            }
            mass[flat] += w;
            action[flat] += w * part.s;
        }
    }
    let dv = grid.cell_volume();
    let rho: Vec<T> = mass.iter().map(|&m| m / dv).collect();
    let s: Vec<T> = action
        .iter()
        .zip(&mass)
        .map(|(&a, &m)| if m > T::zero() { a / m } else { T::zero() })
        .collect();
    Ok((ScalarField::new(grid.clone(), rho)?, ScalarField::new(grid.clone(), s)?))
}
