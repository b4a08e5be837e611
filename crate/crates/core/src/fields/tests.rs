use std::f64::consts::PI;

use proptest::prelude::*;

use super::io;
use super::*;

fn line(lower: f64, upper: f64, n: usize, b: Boundary) -> Grid<f64> {
    Grid::line(lower, upper, n, b).unwrap()
}

#[test]
fn gradient_of_linear_function_is_one_everywhere() {
    // Includes the one-sided edge rows: exact for linear data.
    let g = line(-1.0, 1.0, 64, Boundary::Vanishing);
    let f = ScalarField::from_fn(g, |q| q[0]);
    let df = f.gradient(0).unwrap();
    for &v in df.values() {
        assert!((v - 1.0).abs() < 1e-13, "gradient of q should be 1, got {v}");
    }
}

#[test]
fn gradient_of_constant_is_identically_zero() {
    // Exact for the default stencil: dyadic weights cancel bitwise.
    for b in [Boundary::Periodic, Boundary::Vanishing] {
        let g = line(-2.0, 3.0, 48, b);
        let f = ScalarField::constant(g, 0.7310585786300049);
        let df = f.gradient(0).unwrap();
        assert!(df.values().iter().all(|&v| v == 0.0));
    }
}

#[test]
fn gradient_of_sine_converges_at_second_order() {
    let errs: Vec<f64> = [64usize, 128, 256]
        .iter()
        .map(|&n| {
            let g = line(0.0, 1.0, n, Boundary::Periodic);
            let f = ScalarField::from_fn(g.clone(), |q| (2.0 * PI * q[0]).sin());
            let want = ScalarField::from_fn(g, |q| 2.0 * PI * (2.0 * PI * q[0]).cos());
            let df = f.gradient(0).unwrap();
            df.sub(&want).unwrap().amax()
        })
        .collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 2.0).abs() < 0.1, "observed order {order}");
    }
}

#[test]
fn gradient_o4_converges_at_fourth_order() {
    for b in [Boundary::Periodic, Boundary::Vanishing] {
        let errs: Vec<f64> = [32usize, 64, 128]
            .iter()
            .map(|&n| {
                let g = line(0.0, 1.0, n, b);
                // Smooth and (for the vanishing case) flat at the edges.
                let f = ScalarField::from_fn(g.clone(), |q| (2.0 * PI * q[0]).cos());
                let want = ScalarField::from_fn(g, |q| -2.0 * PI * (2.0 * PI * q[0]).sin());
                let df = f.gradient_o4(0).unwrap();
                df.sub(&want).unwrap().amax()
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 3.5, "observed order {order} for {b:?}");
        }
    }
}

#[test]
fn integrate_unit_box_is_exact() {
    let g = Grid::<f64>::new(vec![
        Axis::new(0.0, 1.0, 16, Boundary::Vanishing),
        Axis::new(0.0, 1.0, 8, Boundary::Vanishing),
    ])
    .unwrap();
    let f = ScalarField::constant(g, 1.0);
    assert!((f.integrate() - 1.0).abs() < 1e-14);
}

#[test]
fn integrate_box_ground_density_is_one() {
    // ρ(q) = 2 cos²(πq) on [-1/2, 1/2]: the cosine mode sums to zero on a
    // symmetric midpoint grid, so the quadrature is exact.
    let g = line(-0.5, 0.5, 64, Boundary::Vanishing);
    let f = ScalarField::from_fn(g, |q| 2.0 * (PI * q[0]).cos().powi(2));
    assert!((f.integrate() - 1.0).abs() < 1e-13);
}

#[test]
fn integrate_gaussian_normalization() {
    let sigma = 0.7;
    let g = line(-10.0, 10.0, 256, Boundary::Vanishing);
    let f = ScalarField::from_fn(g, |q| {
        (-q[0] * q[0] / (2.0 * sigma * sigma)).exp() / (2.0 * PI * sigma * sigma).sqrt()
    });
    assert!((f.integrate() - 1.0).abs() < 1e-8);
}

#[test]
fn mixed_second_derivative_of_bilinear_is_one() {
    let g = Grid::<f64>::new(vec![
        Axis::new(-1.0, 1.0, 24, Boundary::Vanishing),
        Axis::new(-1.0, 1.0, 20, Boundary::Vanishing),
    ])
    .unwrap();
    let f = ScalarField::from_fn(g, |q| q[0] * q[1]);
    let d = f.laplacian_like(0, 1).unwrap();
    for &v in d.values() {
        assert!((v - 1.0).abs() < 1e-11);
    }
    // Symmetry in (i, j).
    let d2 = f.laplacian_like(1, 0).unwrap();
    let diff = d.sub(&d2).unwrap().amax();
    assert!(diff < 1e-12);
}

#[test]
fn second_derivative_of_quadratic_is_two() {
    let g = line(-1.0, 1.0, 32, Boundary::Vanishing);
    let f = ScalarField::from_fn(g, |q| q[0] * q[0]);
    let d = f.laplacian_like(0, 0).unwrap();
    for &v in d.values() {
        assert!((v - 2.0).abs() < 1e-10, "got {v}");
    }
}

#[test]
fn second_derivative_of_cosine_converges() {
    let errs: Vec<f64> = [64usize, 128]
        .iter()
        .map(|&n| {
            let g = line(-0.5, 0.5, n, Boundary::Vanishing);
            let f = ScalarField::from_fn(g.clone(), |q| (PI * q[0]).cos());
            let want = ScalarField::from_fn(g, |q| -PI * PI * (PI * q[0]).cos());
            f.laplacian_like(0, 0).unwrap().sub(&want).unwrap().amax()
        })
        .collect();
    let order = (errs[0] / errs[1]).log2();
    assert!(order > 1.8, "observed order {order}");
}

#[test]
fn periodic_gradient_telescopes_under_quadrature() {
    let g = line(0.0, 2.0, 512, Boundary::Periodic);
    let f = ScalarField::from_fn(g, |q| (PI * q[0]).sin() + 0.25 * (3.0 * PI * q[0]).cos());
    let total = f.gradient(0).unwrap().integrate();
    assert!(total.abs() < 1e-12, "telescoping sum was {total}");
}

#[test]
fn density_derivative_identity_converges_quadratically() {
    // ¼ (∂_iρ/ρ)(∂_jρ/ρ) + ∂_i∂_j√ρ/√ρ − ½ ∂_i∂_jρ/ρ → 0 at O(dq²).
    let defect = |n: usize| -> f64 {
        let g = Grid::new(vec![
            Axis::new(0.0, 1.0, n, Boundary::Periodic),
            Axis::new(0.0, 1.0, n, Boundary::Periodic),
        ])
        .unwrap();
        let rho = ScalarField::from_fn(g, |q| {
            (0.4 * (2.0 * PI * q[0]).sin() + 0.3 * (2.0 * PI * q[1]).cos()).exp()
        });
        let r = rho.map(f64::sqrt);
        let mut worst = 0.0f64;
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            let di = rho.gradient(i).unwrap();
            let dj = rho.gradient(j).unwrap();
            let dij_rho = rho.laplacian_like(i, j).unwrap();
            let dij_r = r.laplacian_like(i, j).unwrap();
            for p in 0..rho.values().len() {
                let rv = rho.values()[p];
                let term = 0.25 * di.values()[p] * dj.values()[p] / (rv * rv)
                    + dij_r.values()[p] / r.values()[p]
                    - 0.5 * dij_rho.values()[p] / rv;
                worst = worst.max(term.abs());
            }
        }
        worst
    };
    let e0 = defect(32);
    let e1 = defect(64);
    let order = (e0 / e1).log2();
    assert!(order > 1.7, "identity defect order {order} (errors {e0:.3e}, {e1:.3e})");
}

#[test]
fn interpolation_matches_bilinear_data() {
    let g = Grid::<f64>::new(vec![
        Axis::new(0.0, 1.0, 16, Boundary::Vanishing),
        Axis::new(0.0, 2.0, 16, Boundary::Vanishing),
    ])
    .unwrap();
    let f = ScalarField::from_fn(g, |q| 2.0 * q[0] + 3.0 * q[1] + 1.0);
    // Multilinear interpolation is exact on affine data away from the edges.
    let v = f.interpolate(&[0.51, 1.13]).unwrap();
    assert!((v - (2.0 * 0.51 + 3.0 * 1.13 + 1.0)).abs() < 1e-12);
    assert!(f.interpolate(&[1.5, 0.5]).is_err());
}

#[test]
fn periodic_interpolation_wraps() {
    let g = line(0.0, 1.0, 64, Boundary::Periodic);
    let f = ScalarField::from_fn(g, |q| (2.0 * PI * q[0]).sin());
    let a = f.interpolate(&[0.001]).unwrap();
    let b = f.interpolate(&[1.001]).unwrap();
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn axis_out_of_range_is_reported() {
    let g = line(0.0, 1.0, 8, Boundary::Periodic);
    let f = ScalarField::zeros(g);
    assert!(matches!(
        f.gradient(1),
        Err(crate::SimError::AxisOutOfRange { axis: 1, dims: 1 })
    ));
}

#[test]
fn csv_and_binary_round_trip() {
    let g = Grid::<f64>::new(vec![
        Axis::new(-1.0, 1.0, 8, Boundary::Periodic),
        Axis::new(0.0, 4.0, 4, Boundary::Vanishing),
    ])
    .unwrap();
    let f = ScalarField::from_fn(g.clone(), |q| q[0].sin() * q[1].cos() + 0.1);
    let mut buf = Vec::new();
    io::write_scalar_csv(&f, &mut buf).unwrap();
    let back = io::read_scalar_csv::<f64, _>(buf.as_slice()).unwrap();
    assert_eq!(f, back);

    let c = ComplexField::from_fn(g, |q| num_complex::Complex::new(q[0], q[1] * 0.5));
    let mut buf = Vec::new();
    io::write_complex_binary(&c, &mut buf).unwrap();
    let back = io::read_complex_binary::<f64, _>(buf.as_slice()).unwrap();
    assert_eq!(c, back);
}

proptest! {
    #[test]
    fn serialization_round_trips_any_field(
        n in 4usize..20,
        seedlike in 0u64..1000,
        periodic in proptest::bool::ANY,
    ) {
        let b = if periodic { Boundary::Periodic } else { Boundary::Vanishing };
        let g = Grid::line(-3.0f64, 2.0, n, b).unwrap();
        let f = ScalarField::from_fn(g, |q| (q[0] * (seedlike as f64 + 1.0)).sin());
        let mut buf = Vec::new();
        io::write_scalar_csv(&f, &mut buf).unwrap();
        let back = io::read_scalar_csv::<f64, _>(buf.as_slice()).unwrap();
        prop_assert_eq!(f, back);
    }

    #[test]
    fn default_gradient_kills_constants(c in -1e3f64..1e3, n in 8usize..64) {
        let g = Grid::line(0.0f64, 1.0, n, Boundary::Vanishing).unwrap();
        let f = ScalarField::constant(g, c);
        let df = f.gradient(0).unwrap();
        prop_assert!(df.values().iter().all(|&v| v == 0.0));
    }
}
