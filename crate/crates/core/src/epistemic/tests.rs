use std::f64::consts::PI;

use super::*;
use crate::fields::{Axis, Boundary, ComplexField, Grid, ScalarField};
use crate::rng::substream;

fn line(lower: f64, upper: f64, n: usize, b: Boundary) -> Grid<f64> {
    Grid::line(lower, upper, n, b).unwrap()
}

// --- ξ law ---------------------------------------------------------------

#[test]
fn two_point_law_hits_both_moments() {
    let hbar = 0.7;
    let model = XiModel::two_point(hbar, 11).unwrap();
    let n = 1_000_000usize;
    let xs = model.sample_xi(n);
    assert_eq!(xs.len(), n);
    assert!(xs.iter().all(|&x| x == hbar || x == -hbar));
    let mean: f64 = xs.iter().sum::<f64>() / n as f64;
    // stderr of the mean is ħ/√n.
    assert!(mean.abs() <= 4.0 * hbar / (n as f64).sqrt(), "mean {mean}");
    let var: f64 = xs.iter().map(|x| x * x).sum::<f64>() / n as f64 - mean * mean;
    // ξ² ≡ ħ² per draw, so only the mean² correction moves the variance.
    assert!((var - hbar * hbar).abs() <= 1e-6 * hbar * hbar, "var {var}");
}

#[test]
fn gaussian_law_moments_within_standard_error() {
    let hbar = 1.3;
    let model = XiModel::gaussian(hbar, 5).unwrap();
    let n = 1_000_000usize;
    let xs = model.sample_xi(n);
    let mean: f64 = xs.iter().sum::<f64>() / n as f64;
    assert!(mean.abs() <= 4.0 * hbar / (n as f64).sqrt(), "mean {mean}");
    let var: f64 = xs.iter().map(|x| x * x).sum::<f64>() / n as f64 - mean * mean;
    let se = (2.0f64 / n as f64).sqrt() * hbar * hbar;
    assert!((var - hbar * hbar).abs() <= 4.0 * se, "var {var}");
}

#[test]
fn xi_sampling_is_deterministic_and_batch_stable() {
    let model = XiModel::gaussian(1.0, 42).unwrap();
    let a = model.sample_xi(10_000);
    let b = model.sample_xi(10_000);
    assert_eq!(a, b);
    // A shorter run is a prefix of a longer one: batch layout is fixed.
    let c = model.sample_xi(2_000);
    assert_eq!(&a[..2_000], &c[..]);
    assert!(model.sample_xi(0).is_empty());
}

// --- momentum law ---------------------------------------------------------

#[test]
fn gaussian_momentum_field_is_linear_in_q() {
    let sigma = 1.0;
    let hbar = 1.0;
    let g = line(-8.0, 8.0, 1024, Boundary::Vanishing);
    let state = gaussian_state(&g, sigma, 0.0, hbar).unwrap();
    for xi in [hbar, -hbar, 0.3] {
        let p = state.momentum_field(xi).unwrap();
        for (i, &v) in p[0].values().iter().enumerate() {
            let q = g.axes()[0].coord(i);
            if q.abs() > 4.0 * sigma {
                continue;
            }
            let want = -xi * q / (2.0 * sigma * sigma);
            assert!(
                (v - want).abs() <= 1e-3 * (1.0 + want.abs()),
                "p({q}; {xi}) = {v}, want {want}"
            );
        }
    }
}

#[test]
fn plane_wave_momentum_is_sharp_for_every_xi() {
    let g = line(0.0, 1.0, 256, Boundary::Periodic);
    let state = plane_wave_state(&g, 1, 1.0).unwrap();
    let p0 = plane_wave_momentum(&g, 1, 1.0);
    let pa = state.momentum_field(1.0).unwrap();
    let pb = state.momentum_field(-1.0).unwrap();
    // A uniform density has exactly zero log-derivative, so ξ drops out.
    assert_eq!(pa[0].values(), pb[0].values());
    for &v in pa[0].values() {
        assert!((v - p0).abs() <= 1e-3 * p0.abs(), "p = {v}, want {p0}");
    }
}

#[test]
fn box_momentum_field_matches_tangent_form() {
    let hbar = 1.0;
    let g = line(-0.5, 0.5, 2048, Boundary::Vanishing);
    let state = box_ground_state(&g, hbar).unwrap();
    let xi = 0.8;
    let p = state.momentum_field(xi).unwrap();
    for (i, &v) in p[0].values().iter().enumerate() {
        let q = g.axes()[0].coord(i);
        if q.abs() > 0.4 {
            continue;
        }
        let want = -xi * PI * (PI * q).tan();
        assert!(
            (v - want).abs() <= 1e-3 * (1.0 + want.abs()),
            "p({q}) = {v}, want {want}"
        );
    }
}

#[test]
fn interior_node_with_live_slope_is_an_error() {
    // One-sided ramp: density vanishes on the left half while its gradient
    // straddling the kink is nonzero, so the momentum law must refuse.
    let g = line(-1.0, 1.0, 256, Boundary::Vanishing);
    let rho = ScalarField::from_fn(g.clone(), |q| if q[0] > 0.0 { q[0] } else { 0.0 });
    let state = EpistemicState::from_unnormalized(
        rho,
        ScalarField::zeros(g),
        StateKind::Quantum,
        1.0,
    )
    .unwrap();
    assert!(matches!(
        state.momentum_field(1.0),
        Err(crate::SimError::Node { .. })
    ));
}

#[test]
fn underflowed_tails_are_not_nodes() {
    // Far Gaussian tails underflow to literal zero, but the gradient dies
    // with them; the momentum law stays defined.
    let g = line(-60.0, 60.0, 2048, Boundary::Vanishing);
    let state = gaussian_state(&g, 1.0, 0.0, 1.0).unwrap();
    assert!(state.rho().min_value() == 0.0);
    assert!(state.momentum_field(1.0).is_ok());
}

#[test]
fn xi_average_of_momentum_recovers_phase_gradient() {
    let g = line(0.0, 1.0, 256, Boundary::Periodic);
    let mut rng = substream(3, 0);
    let state =
        random_smooth_state(&g, 1.0, &RandomStateOptions::default(), &mut rng).unwrap();
    let law = state.momentum_law().unwrap();
    let plus = law.field(1.0);
    let minus = law.field(-1.0);
    // The two-point average over ξ = ±ħ reproduces ∂S identically.
    let mean = plus[0].zip_map(&minus[0], |a, b| 0.5 * (a + b)).unwrap();
    let diff = mean.sub(&law.grad_s()[0]).unwrap().amax();
    assert!(diff <= 1e-12 * law.grad_s()[0].amax().max(1.0));
}

#[test]
fn sharp_momentum_forces_uniform_density() {
    // Var_ξ(p) vanishes exactly where ∂ρ/ρ does. A plane wave has it zero
    // everywhere; any non-uniform ρ has it live somewhere.
    let g = line(0.0, 1.0, 128, Boundary::Periodic);
    let flat = plane_wave_state(&g, 2, 1.0).unwrap();
    assert_eq!(flat.momentum_law().unwrap().dlog_rho()[0].amax(), 0.0);
    let mut rng = substream(9, 0);
    let bumpy = random_smooth_state(&g, 1.0, &RandomStateOptions::default(), &mut rng).unwrap();
    assert!(bumpy.momentum_law().unwrap().dlog_rho()[0].amax() > 0.1);
}

// --- sampling --------------------------------------------------------------

#[test]
fn gaussian_ensemble_position_variance() {
    let sigma = 1.2;
    let g = line(-10.0, 10.0, 2048, Boundary::Vanishing);
    let state = gaussian_state(&g, sigma, 0.0, 1.0).unwrap();
    let model = XiModel::two_point(1.0, 7).unwrap();
    let n = 100_000usize;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for_each_sample(&state, &model, n, |q, _, _| {
        sum += q[0];
        sumsq += q[0] * q[0];
    })
    .unwrap();
    let mean = sum / n as f64;
    let var = sumsq / n as f64 - mean * mean;
    let se = (2.0f64 / n as f64).sqrt() * sigma * sigma;
    assert!((var - sigma * sigma).abs() <= 4.0 * se, "var {var}");
}

#[test]
fn box_ensemble_momentum_variance() {
    let hbar = 1.0;
    let g = line(-0.5, 0.5, 2048, Boundary::Vanishing);
    let state = box_ground_state(&g, hbar).unwrap();
    let model = XiModel::two_point(hbar, 21).unwrap();
    let n = 1_000_000usize;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for_each_sample(&state, &model, n, |_, _, p| {
        let v = p[0] * p[0];
        sum += v;
        sumsq += v * v;
    })
    .unwrap();
    let mean = sum / n as f64;
    let se = ((sumsq / n as f64 - mean * mean) / n as f64).sqrt();
    let want = PI * PI * hbar * hbar;
    assert!(
        (mean - want).abs() <= 4.0 * se,
        "Var(p) = {mean} ± {se}, want {want}"
    );
}

#[test]
fn ensembles_are_deterministic_and_prefix_stable() {
    let g = line(-6.0, 6.0, 256, Boundary::Vanishing);
    let state = gaussian_state(&g, 1.0, 0.5, 1.0).unwrap();
    let model = XiModel::gaussian(1.0, 99).unwrap();
    let a = draw_ensemble(&state, &model, 500).unwrap();
    let b = draw_ensemble(&state, &model, 500).unwrap();
    assert_eq!(a.len(), 500);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.q, y.q);
        assert_eq!(x.xi, y.xi);
        assert_eq!(x.p, y.p);
    }
    let long = draw_ensemble(&state, &model, 9000).unwrap();
    for (x, y) in a.iter().zip(long.iter().take(500)) {
        assert_eq!(x.q, y.q);
    }
    assert!(draw_ensemble(&state, &model, 0).unwrap().is_empty());
}

#[test]
fn sample_momenta_obey_the_law_by_construction() {
    let g = line(-8.0, 8.0, 512, Boundary::Vanishing);
    let state = gaussian_state(&g, 1.0, 0.0, 1.0).unwrap();
    let model = XiModel::two_point(1.0, 13).unwrap();
    let law = state.momentum_law().unwrap();
    let mut buf = vec![0.0];
    for s in draw_ensemble(&state, &model, 200).unwrap() {
        law.eval_into(&s.q, s.xi, &mut buf).unwrap();
        assert_eq!(buf[0], s.p[0]);
    }
}

// --- density from a momentum field ------------------------------------------

#[test]
fn solve_density_gaussian() {
    let sigma = 0.9;
    let g = line(-8.0, 8.0, 2048, Boundary::Vanishing);
    let f = ScalarField::from_fn(g.clone(), |q| -q[0] / (2.0 * sigma * sigma));
    let state = solve_density_for_field(&f, 1.0).unwrap();
    let want = gaussian_state(&g, sigma, 0.0, 1.0).unwrap();
    for (a, b) in state.rho().values().iter().zip(want.rho().values()) {
        if *b > 1e-3 {
            assert!((a - b).abs() <= 1e-4 * b, "rho {a} want {b}");
        }
    }
}

#[test]
fn solve_density_zero_field_gives_uniform() {
    let g = line(-2.0, 2.0, 128, Boundary::Vanishing);
    let state = solve_density_for_field(&ScalarField::zeros(g), 1.0).unwrap();
    let u = state.rho().values()[0];
    assert!((u - 0.25).abs() < 1e-12);
    assert!(state.rho().values().iter().all(|&v| (v - u).abs() < 1e-12));
}

#[test]
fn solve_density_box_tangent_field() {
    let g = line(-0.5, 0.5, 4096, Boundary::Vanishing);
    let f = ScalarField::from_fn(g.clone(), |q| -PI * (PI * q[0]).tan());
    let state = solve_density_for_field(&f, 1.0).unwrap();
    for (i, &v) in state.rho().values().iter().enumerate() {
        let q = g.axes()[0].coord(i);
        let want = 2.0 * (PI * q).cos().powi(2);
        if want > 0.02 {
            assert!((v - want).abs() <= 1e-3 * want, "rho({q}) = {v}, want {want}");
        }
    }
}

#[test]
fn non_normalizable_field_is_rejected() {
    // On a finite grid the permitted density exists whenever the
    // antiderivative of f stays finite; divergence shows up as overflow of
    // the cumulative integral.
    let g = line(-40.0, 40.0, 512, Boundary::Vanishing);
    let f = ScalarField::constant(g, 1e307);
    assert!(matches!(
        solve_density_for_field(&f, 1.0),
        Err(crate::SimError::NonNormalizable)
    ));
}

// --- wavefunction map --------------------------------------------------------

#[test]
fn box_state_maps_to_real_cosine() {
    let g = line(-0.5, 0.5, 512, Boundary::Vanishing);
    let state = box_ground_state(&g, 1.0).unwrap();
    let psi = to_wavefunction(&state).unwrap();
    for (i, v) in psi.values().iter().enumerate() {
        let q = g.axes()[0].coord(i);
        let want = 2.0f64.sqrt() * (PI * q).cos();
        assert!((v.re - want).abs() < 2e-8, "psi({q}).re = {}, want {want}", v.re);
        assert_eq!(v.im, 0.0);
    }
}

#[test]
fn plane_wave_round_trip_recovers_linear_phase_and_winding() {
    let hbar = 0.5;
    let g = line(0.0, 2.0, 256, Boundary::Periodic);
    let state = plane_wave_state(&g, 3, hbar).unwrap();
    let p0 = plane_wave_momentum(&g, 3, hbar);
    let psi = to_wavefunction(&state).unwrap();
    let (back, report) = from_wavefunction(&psi, hbar).unwrap();
    assert_eq!(report.winding, vec![3]);
    assert_eq!(report.undefined_count, 0);
    // ρ uniform, S linear up to a constant.
    for &r in back.rho().values() {
        assert!((r - 0.5).abs() < 1e-12);
    }
    // A winding phase cannot be single-valued on the circle: S comes back
    // unwrapped with one branch cut. It must agree with p₀·q modulo 2πħ
    // everywhere, and all but one neighbor jump must be exactly p₀·dq.
    let s = back.phase().values();
    let two_pi_h = std::f64::consts::TAU * hbar;
    let mut cuts = 0;
    for i in 0..s.len() {
        let q = g.axes()[0].coord(i);
        let m = (s[i] - p0 * q) / two_pi_h;
        assert!((m - m.round()).abs() < 1e-9, "S({q}) off the 2πħ lattice");
        // Neighbor jumps along the line (the coordinate seam excluded).
        if i + 1 < s.len() {
            let jump = s[i + 1] - s[i] - p0 * g.axes()[0].step();
            if jump.abs() > 1e-9 {
                cuts += 1;
                assert!(
                    ((jump / two_pi_h).abs() - 3.0).abs() < 1e-9,
                    "cut jump {jump} is not the full winding"
                );
            }
        }
    }
    assert_eq!(cuts, 1, "expected exactly one branch cut");
}

#[test]
fn global_phase_becomes_constant_s() {
    let theta = 1.234;
    let g = line(-8.0, 8.0, 512, Boundary::Vanishing);
    let hbar = 1.0;
    let gauss = gaussian_state(&g, 1.0, 0.0, hbar).unwrap();
    let psi = to_wavefunction(&gauss)
        .unwrap()
        .scale(num_complex::Complex::from_polar(1.0, theta));
    let (state, _) = from_wavefunction(&psi, hbar).unwrap();
    // Same ρ, S constant = ħθ (near the support; tails are masked/filled).
    for (a, b) in state.rho().values().iter().zip(gauss.rho().values()) {
        assert!((a - b).abs() <= 1e-12 * 0.5);
    }
    for (i, &s) in state.phase().values().iter().enumerate() {
        let q = g.axes()[0].coord(i);
        if q.abs() < 5.0 {
            assert!((s - hbar * theta).abs() < 1e-9, "S({q}) = {s}");
        }
    }
}

#[test]
fn real_positive_wavefunction_has_zero_phase() {
    let g = line(-8.0, 8.0, 256, Boundary::Vanishing);
    let psi = gaussian_packet(&g, 1.0, 0.0, 0.0, 1.0).unwrap();
    let (state, _) = from_wavefunction(&psi, 1.0).unwrap();
    assert!(state.phase().amax() < 1e-12);
}

#[test]
fn round_trip_preserves_rho_exactly_and_s_up_to_constant() {
    // Winding-free state: the recovered phase is single-valued, so it must
    // match up to one additive constant (winding states instead come back
    // with a branch cut; see the plane-wave test).
    let g = line(0.0, 1.0, 128, Boundary::Periodic);
    let mut rng = substream(17, 0);
    let opts = RandomStateOptions { allow_winding: false, ..Default::default() };
    let state = random_smooth_state(&g, 1.0, &opts, &mut rng).unwrap();
    let psi = to_wavefunction(&state).unwrap();
    let (back, report) = from_wavefunction(&psi, 1.0).unwrap();
    assert_eq!(report.undefined_count, 0);
    for (a, b) in back.rho().values().iter().zip(state.rho().values()) {
        assert!((a - b).abs() <= 1e-14 + 1e-12 * b.abs());
    }
    let offsets: Vec<f64> = back
        .phase()
        .values()
        .iter()
        .zip(state.phase().values())
        .map(|(a, b)| a - b)
        .collect();
    let spread = offsets.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - offsets.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread < 1e-9, "phase offset spread {spread}");
}

#[test]
fn nodes_are_masked_not_fatal() {
    // First excited box mode has a node at the center; an odd point count
    // puts a cell center exactly on it.
    let g = line(-0.5, 0.5, 255, Boundary::Vanishing);
    let psi = ComplexField::from_fn(g, |q| {
        num_complex::Complex::new(2.0f64.sqrt() * (2.0 * PI * q[0]).sin(), 0.0)
    })
    .normalized()
    .unwrap();
    let (_, report) = from_wavefunction(&psi, 1.0).unwrap();
    assert!(report.undefined_count > 0);
}

// --- serialization -----------------------------------------------------------

#[test]
fn state_round_trips_through_csv() {
    let g = Grid::<f64>::new(vec![
        Axis::new(-1.0, 1.0, 16, Boundary::Vanishing),
        Axis::new(0.0, 1.0, 8, Boundary::Periodic),
    ])
    .unwrap();
    let rho = ScalarField::from_fn(g.clone(), |q| (-(q[0] * q[0]) - 0.3 * q[1]).exp());
    let phase = ScalarField::from_fn(g.clone(), |q| 0.2 * q[0] + q[1]);
    let state = EpistemicState::from_unnormalized(rho, phase, StateKind::Quantum, 0.7).unwrap();
    let mut buf = Vec::new();
    write_state_csv(&state, &mut buf).unwrap();
    let back = read_state_csv::<f64, _>(buf.as_slice()).unwrap();
    assert_eq!(back.kind(), StateKind::Quantum);
    assert!((back.hbar() - 0.7).abs() < 1e-15);
    assert_eq!(back.rho().values(), state.rho().values());
    assert_eq!(back.phase().values(), state.phase().values());
}
