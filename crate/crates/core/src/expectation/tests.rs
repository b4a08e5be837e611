use std::f64::consts::PI;

use super::*;
use crate::epistemic::{
    box_ground_state, gaussian_state, plane_wave_momentum, plane_wave_state, random_smooth_state,
    to_wavefunction, RandomStateOptions, XiModel,
};
use crate::fields::{Boundary, Grid, ScalarField};
use crate::rng::substream;

fn line(lower: f64, upper: f64, n: usize, b: Boundary) -> Grid<f64> {
    Grid::line(lower, upper, n, b).unwrap()
}

// --- pointwise evaluation ----------------------------------------------------

#[test]
fn evaluate_momentum_squared() {
    let obs = QuadraticObservable::<f64>::momentum_squared(1, 0).unwrap();
    assert_eq!(obs.evaluate(&[0.3], &[2.0]).unwrap(), 4.0);
}

#[test]
fn evaluate_potential_only_ignores_momentum() {
    let g = line(-1.0, 1.0, 32, Boundary::Vanishing);
    let obs = QuadraticObservable::builder(1)
        .potential(Coeff::Field(ScalarField::from_fn(g, |q| q[0] * q[0])))
        .build()
        .unwrap();
    // Field coefficients are sampled multilinearly: exact to O(h²) here.
    let v = obs.evaluate(&[0.5], &[123.0]).unwrap();
    assert!((v - 0.25).abs() < 2e-3, "V(0.5) = {v}");
    assert_eq!(v, obs.evaluate(&[0.5], &[0.0]).unwrap());
}

#[test]
fn evaluate_kinetic() {
    let obs = QuadraticObservable::<f64>::kinetic(&[1.0]).unwrap();
    assert!((obs.evaluate(&[0.0], &[3.0]).unwrap() - 4.5).abs() < 1e-14);
}

#[test]
fn evaluate_angular_momentum() {
    let g = Grid::<f64>::new(vec![
        crate::fields::Axis::new(-2.0, 2.0, 32, Boundary::Vanishing),
        crate::fields::Axis::new(-2.0, 2.0, 32, Boundary::Vanishing),
    ])
    .unwrap();
    let obs = QuadraticObservable::angular_momentum_z(&g).unwrap();
    // L_z = x p_y − y p_x at (x, y) = (1, 0.5), p = (2, -1): -1 - 1 = -2.
    let v = obs.evaluate(&[1.0, 0.5], &[2.0, -1.0]).unwrap();
    assert!((v + 2.0).abs() < 1e-10, "L_z = {v}");
}

// --- closed-form engine --------------------------------------------------------

#[test]
fn closed_gaussian_momentum_variance() {
    let sigma = 1.0;
    let hbar = 1.0;
    let g = line(-8.0, 8.0, 4096, Boundary::Vanishing);
    let state = gaussian_state(&g, sigma, 0.0, hbar).unwrap();
    let obs = QuadraticObservable::momentum_squared(1, 0).unwrap();
    let got = ensemble_average_closed(&obs, &state).unwrap();
    let want = hbar * hbar / (4.0 * sigma * sigma);
    assert!(
        (got - want).abs() <= 1e-6 * want,
        "⟨p²⟩ = {got}, want {want} (rel {:.2e})",
        (got - want).abs() / want
    );
}

#[test]
fn closed_plane_wave_momentum_is_p0() {
    let g = line(0.0, 1.0, 1024, Boundary::Periodic);
    let state = plane_wave_state(&g, 2, 1.0).unwrap();
    let p0 = plane_wave_momentum(&g, 2, 1.0);
    let obs = QuadraticObservable::momentum(1, 0).unwrap();
    let got = ensemble_average_closed(&obs, &state).unwrap();
    assert!((got - p0).abs() <= 1e-8 * p0.abs(), "⟨p⟩ = {got}, want {p0}");
}

#[test]
fn closed_box_kinetic_energy() {
    let hbar = 1.0;
    let g = line(-0.5, 0.5, 1024, Boundary::Vanishing);
    let state = box_ground_state(&g, hbar).unwrap();
    let obs = QuadraticObservable::kinetic(&[1.0]).unwrap();
    let got = ensemble_average_closed(&obs, &state).unwrap();
    let want = PI * PI * hbar * hbar / 2.0;
    assert!(
        (got - want).abs() <= 1e-6 * want,
        "⟨p²/2⟩ = {got}, want {want} (rel {:.2e})",
        (got - want).abs() / want
    );
}

// --- quantum engine -------------------------------------------------------------

#[test]
fn quantum_momentum_variance_of_real_gaussian() {
    let sigma = 1.0;
    let hbar = 1.0;
    let g = line(-8.0, 8.0, 2048, Boundary::Vanishing);
    let state = gaussian_state(&g, sigma, 0.0, hbar).unwrap();
    let psi = to_wavefunction(&state).unwrap();
    let obs = QuadraticObservable::momentum_squared(1, 0).unwrap();
    let got = quantum_expectation(&obs, &psi, hbar).unwrap();
    let want = hbar * hbar / (4.0 * sigma * sigma);
    assert!((got.re - want).abs() <= 1e-6 * want, "Re = {}, want {want}", got.re);
    assert!(got.im.abs() <= 1e-10, "Im = {}", got.im);
}

#[test]
fn quantum_position_is_density_mean() {
    let g = line(-8.0, 8.0, 1024, Boundary::Vanishing);
    let state = gaussian_state(&g, 0.8, 1.3, 1.0).unwrap();
    let psi = to_wavefunction(&state).unwrap();
    let obs = QuadraticObservable::position(&g, 0).unwrap();
    let got = quantum_expectation(&obs, &psi, 1.0).unwrap();
    assert!((got.re - 1.3).abs() < 1e-8, "⟨q⟩ = {}", got.re);
    assert!(got.im.abs() < 1e-12);
}

#[test]
fn quantum_imaginary_part_vanishes_under_refinement() {
    let hbar = 1.0;
    let im_at = |n: usize| -> f64 {
        let g = line(0.0, 1.0, n, Boundary::Periodic);
        let mut rng = substream(23, 0);
        let state = random_smooth_state(&g, hbar, &RandomStateOptions::default(), &mut rng).unwrap();
        let psi = to_wavefunction(&state).unwrap();
        // A deliberately awkward observable: field metric, gauge, and linear
        // term all switched on.
        let obs = QuadraticObservable::builder(1)
            .metric(0, 0, Coeff::Field(ScalarField::from_fn(g.clone(), |q| {
                1.5 + 0.5 * (2.0 * PI * q[0]).cos()
            })))
            .unwrap()
            .gauge(0, Coeff::Const(0.3))
            .unwrap()
            .linear(0, Coeff::Field(ScalarField::from_fn(g.clone(), |q| {
                0.4 * (2.0 * PI * q[0]).sin()
            })))
            .unwrap()
            .potential(Coeff::Field(ScalarField::from_fn(g, |q| q[0] * (1.0 - q[0]))))
            .build()
            .unwrap();
        quantum_expectation(&obs, &psi, hbar).unwrap().im.abs()
    };
    let coarse = im_at(64);
    let fine = im_at(128);
    assert!(fine < coarse, "imaginary part did not shrink: {coarse} -> {fine}");
    assert!(fine <= 1e-6, "imaginary residual {fine}");
}

// --- Monte Carlo engine -----------------------------------------------------------

#[test]
fn mc_symmetric_gaussian_position_mean_is_zero() {
    let g = line(-8.0, 8.0, 1024, Boundary::Vanishing);
    let state = gaussian_state(&g, 1.0, 0.0, 1.0).unwrap();
    let model = XiModel::two_point(1.0, 31).unwrap();
    let obs = QuadraticObservable::position(&g, 0).unwrap();
    let est = ensemble_average_mc(&obs, &state, &model, 100_000).unwrap();
    assert!(est.value.abs() <= 4.0 * est.stderr, "⟨q⟩ = {} ± {}", est.value, est.stderr);
}

#[test]
fn mc_gaussian_momentum_variance() {
    let sigma = 1.0;
    let hbar = 1.0;
    let g = line(-8.0, 8.0, 2048, Boundary::Vanishing);
    let state = gaussian_state(&g, sigma, 0.0, hbar).unwrap();
    let model = XiModel::two_point(hbar, 77).unwrap();
    let obs = QuadraticObservable::momentum_squared(1, 0).unwrap();
    let est = ensemble_average_mc(&obs, &state, &model, 200_000).unwrap();
    let want = hbar * hbar / (4.0 * sigma * sigma);
    assert!(
        est.sigmas_from(want) <= 4.0,
        "⟨p²⟩ = {} ± {}, want {want}",
        est.value,
        est.stderr
    );
}

#[test]
fn mc_box_momentum_variance() {
    let hbar = 1.0;
    let g = line(-0.5, 0.5, 2048, Boundary::Vanishing);
    let state = box_ground_state(&g, hbar).unwrap();
    let model = XiModel::two_point(hbar, 5).unwrap();
    let obs = QuadraticObservable::momentum_squared(1, 0).unwrap();
    let est = ensemble_average_mc(&obs, &state, &model, 400_000).unwrap();
    let want = PI * PI * hbar * hbar;
    assert!(
        est.sigmas_from(want) <= 4.0,
        "⟨p²⟩ = {} ± {}, want {want}",
        est.value,
        est.stderr
    );
}

#[test]
fn mc_is_deterministic() {
    let g = line(-6.0, 6.0, 512, Boundary::Vanishing);
    let state = gaussian_state(&g, 1.0, 0.0, 1.0).unwrap();
    let model = XiModel::gaussian(1.0, 123).unwrap();
    let obs = QuadraticObservable::momentum_squared(1, 0).unwrap();
    let a = ensemble_average_mc(&obs, &state, &model, 50_000).unwrap();
    let b = ensemble_average_mc(&obs, &state, &model, 50_000).unwrap();
    assert_eq!(a.value, b.value);
    assert_eq!(a.stderr, b.stderr);
}

#[test]
fn mc_needs_at_least_two_samples() {
    let g = line(-6.0, 6.0, 64, Boundary::Vanishing);
    let state = gaussian_state(&g, 1.0, 0.0, 1.0).unwrap();
    let model = XiModel::two_point(1.0, 0).unwrap();
    let obs = QuadraticObservable::position(&g, 0).unwrap();
    assert!(ensemble_average_mc(&obs, &state, &model, 1).is_err());
}

// --- three-way agreement ------------------------------------------------------------

#[test]
fn three_way_agreement_on_random_states() {
    let hbar = 1.0;
    let n_grid = 512;
    let g = line(0.0, 1.0, n_grid, Boundary::Periodic);
    let mut rng = substream(2024, 0);
    for trial in 0..10 {
        let state =
            random_smooth_state(&g, hbar, &RandomStateOptions::default(), &mut rng).unwrap();
        let psi = to_wavefunction(&state).unwrap();
        let obs = random_observable(&g, &mut rng);
        let closed = ensemble_average_closed(&obs, &state).unwrap();
        let quantum = quantum_expectation(&obs, &psi, hbar).unwrap();
        assert!(
            (closed - quantum.re).abs() <= 1e-5 * (1.0 + closed.abs()),
            "trial {trial}: closed {closed} vs quantum {}",
            quantum.re
        );
        assert!(quantum.im.abs() <= 1e-6, "trial {trial}: Im = {}", quantum.im);
        let model = XiModel::two_point(hbar, 1000 + trial).unwrap();
        let mc = ensemble_average_mc(&obs, &state, &model, 20_000).unwrap();
        assert!(
            mc.sigmas_from(closed) <= 4.0,
            "trial {trial}: mc {} ± {} vs closed {closed}",
            mc.value,
            mc.stderr
        );
    }
}

pub(super) fn random_observable(
    g: &Grid<f64>,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> QuadraticObservable<f64> {
    use rand::Rng;
    let span = g.axes()[0].extent();
    let mut wave = |amp: f64, rng: &mut rand_chacha::ChaCha8Rng| -> Coeff<f64> {
        let a: f64 = rng.random_range(-amp..amp);
        let b: f64 = rng.random_range(-amp..amp);
        let k = rng.random_range(1..=2) as f64;
        let g2 = g.clone();
        Coeff::Field(ScalarField::from_fn(g2, move |q| {
            let x = 2.0 * PI * k * q[0] / span;
            a * x.cos() + b * x.sin()
        }))
    };
    let metric = if rng.random::<bool>() {
        Coeff::Const(rng.random_range(0.5..2.0))
    } else {
        // Positive field metric.
        let base: f64 = rng.random_range(0.8..1.5);
        let amp: f64 = rng.random_range(0.0..0.4);
        let k = rng.random_range(1..=2) as f64;
        let g2 = g.clone();
        Coeff::Field(ScalarField::from_fn(g2, move |q| {
            base + amp * (2.0 * PI * k * q[0] / span).cos()
        }))
    };
    let gauge = if rng.random::<bool>() {
        Coeff::Const(rng.random_range(-0.5..0.5))
    } else {
        wave(0.4, rng)
    };
    let linear = if rng.random::<bool>() { Coeff::zero() } else { wave(0.5, rng) };
    let potential = wave(0.8, rng);
    QuadraticObservable::builder(1)
        .metric(0, 0, metric)
        .unwrap()
        .gauge(0, gauge)
        .unwrap()
        .linear(0, linear)
        .unwrap()
        .potential(potential)
        .label("random")
        .build()
        .unwrap()
}

// --- uncertainty ---------------------------------------------------------------------

#[test]
fn gaussian_saturates_the_uncertainty_bound() {
    let hbar = 1.0;
    let g = line(-8.0, 8.0, 4096, Boundary::Vanishing);
    let state = gaussian_state(&g, 1.0, 0.0, hbar).unwrap();
    let r = uncertainty_product(&state, 0).unwrap();
    let want = hbar / 2.0;
    assert!(
        (r.product - want).abs() <= 1e-6 * want,
        "σ_q σ_p = {} (rel {:.2e})",
        r.product,
        (r.product - want).abs() / want
    );
}

#[test]
fn box_uncertainty_product_closed_form() {
    let hbar = 1.0;
    let g = line(-0.5, 0.5, 1024, Boundary::Vanishing);
    let state = box_ground_state(&g, hbar).unwrap();
    let r = uncertainty_product(&state, 0).unwrap();
    let sq_want = ((PI * PI - 6.0) / (12.0 * PI * PI)).sqrt();
    let sp_want = PI * hbar;
    let prod_want = ((PI * PI - 6.0) / 3.0).sqrt() * hbar / 2.0;
    assert!((r.sigma_q - sq_want).abs() <= 1e-6 * sq_want, "σ_q = {}", r.sigma_q);
    assert!((r.sigma_p - sp_want).abs() <= 1e-6 * sp_want, "σ_p = {}", r.sigma_p);
    assert!((r.product - prod_want).abs() <= 1e-6 * prod_want, "product = {}", r.product);
    // ≈ 0.56786·ħ, comfortably above ħ/2.
    assert!((r.product - 0.56786 * hbar).abs() < 1e-4);
}

#[test]
fn uncertainty_bound_holds_for_random_states() {
    let hbar = 1.0;
    let g = line(-10.0, 10.0, 512, Boundary::Vanishing);
    let mut rng = substream(7, 0);
    for _ in 0..50 {
        let state = crate::epistemic::random_localized_state(
            &g,
            hbar,
            &RandomStateOptions::default(),
            &mut rng,
        )
        .unwrap();
        let (var_q, fisher, var_p) = uncertainty_chain(&state, 0).unwrap();
        let bound = hbar * hbar / 4.0;
        assert!(var_q * fisher >= bound - 1e-6, "CS step: {} < {bound}", var_q * fisher);
        assert!(var_p >= fisher - 1e-9, "variance split: {var_p} < {fisher}");
        let product = (var_q * var_p).sqrt();
        assert!(product >= hbar / 2.0 - 1e-6, "product {product}");
    }
}

#[test]
fn mc_uncertainty_matches_closed_for_gaussian() {
    let hbar = 1.0;
    let g = line(-8.0, 8.0, 2048, Boundary::Vanishing);
    let state = gaussian_state(&g, 1.0, 0.0, hbar).unwrap();
    let model = XiModel::two_point(hbar, 404).unwrap();
    let mc = uncertainty_product_mc(&state, &model, 0, 200_000).unwrap();
    assert!(
        (mc.product - hbar / 2.0).abs() <= 4.0 * mc.product_stderr,
        "product {} ± {}",
        mc.product,
        mc.product_stderr
    );
}

#[test]
fn two_point_and_gaussian_laws_agree() {
    let hbar = 1.0;
    let g = line(-8.0, 8.0, 1024, Boundary::Vanishing);
    let state = gaussian_state(&g, 1.0, 0.0, hbar).unwrap();
    let obs = QuadraticObservable::momentum_squared(1, 0).unwrap();
    let a = ensemble_average_mc(&obs, &state, &XiModel::two_point(hbar, 8).unwrap(), 100_000)
        .unwrap();
    let b = ensemble_average_mc(&obs, &state, &XiModel::gaussian(hbar, 9).unwrap(), 100_000)
        .unwrap();
    let combined = (a.stderr * a.stderr + b.stderr * b.stderr).sqrt();
    assert!(
        (a.value - b.value).abs() <= 4.0 * combined,
        "two_point {} vs gaussian {}",
        a.value,
        b.value
    );
}
