mod common;

use helibudget_core::spectral::{
    curl, divergence, gradient, inverse_laplacian_zero_mean, laplacian, leray_project, partial, volume_integral,
};
use helibudget_core::{Grid, ScalarField, VectorField};
use proptest::prelude::*;

const N: usize = 12;

type Mode = ([i32; 3], f64, f64);

fn modes() -> impl Strategy<Value = Vec<Mode>> {
    prop::collection::vec(([-3i32..=3, -3i32..=3, -3i32..=3], -1.0f64..1.0, -1.0f64..1.0), 1..6)
}

fn trig(g: &Grid, terms: &[Mode]) -> ScalarField {
    ScalarField::from_fn(g, |x, y, z| {
        terms
            .iter()
            .map(|&([a, b, c], cs, sn)| {
                let ph = a as f64 * x + b as f64 * y + c as f64 * z;
                cs * ph.cos() + sn * ph.sin()
            })
            .sum()
    })
}

fn trig_vec(g: &Grid, t: &[Vec<Mode>; 3]) -> VectorField {
    VectorField::new(trig(g, &t[0]), trig(g, &t[1]), trig(g, &t[2]))
}

fn scale(f: &ScalarField) -> f64 {
    f.max_abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn round_trip_is_identity(values in prop::collection::vec(-10.0f64..10.0, N * N * N)) {
        let g = common::grid(N);
        let f = ScalarField::from_values(&g, values);
        let back = f.to_spectral().into_physical();
        prop_assert!(common::max_diff(&f, &back) <= 1e-13 * scale(&f));
    }

    #[test]
    fn parseval(values in prop::collection::vec(-10.0f64..10.0, N * N * N)) {
        let g = common::grid(N);
        let f = ScalarField::from_values(&g, values);
        let physical = f.mul_pointwise(&f).integral();
        let spectral = f.to_spectral().energy();
        prop_assert!((physical - spectral).abs() <= 1e-12 * physical);
    }

    #[test]
    fn derivative_of_trig_sum_is_exact(terms in modes(), axis in 0usize..3) {
        let g = common::grid(N);
        let f = trig(&g, &terms);
        let exact = ScalarField::from_fn(&g, |x, y, z| {
            terms
                .iter()
                .map(|&(k, cs, sn)| {
                    let ph = k[0] as f64 * x + k[1] as f64 * y + k[2] as f64 * z;
                    k[axis] as f64 * (sn * ph.cos() - cs * ph.sin())
                })
                .sum()
        });
        prop_assert!(common::max_diff(&partial(&f, axis), &exact) <= 1e-12 * scale(&exact));
    }

    #[test]
    fn divergence_of_curl_vanishes(t in [modes(), modes(), modes()]) {
        let g = common::grid(N);
        let v = trig_vec(&g, &t);
        prop_assert!(divergence(&curl(&v)).max_abs() <= 1e-12 * v.max_abs().max(1.0));
    }

    #[test]
    fn curl_of_gradient_vanishes(terms in modes()) {
        let g = common::grid(N);
        let f = trig(&g, &terms);
        prop_assert!(curl(&gradient(&f)).max_abs() <= 1e-12 * scale(&f));
    }

    #[test]
    fn divergence_integrates_to_zero(t in [modes(), modes(), modes()]) {
        let g = common::grid(N);
        let v = trig_vec(&g, &t);
        let total = volume_integral(&divergence(&v));
        prop_assert!(total.abs() <= 1e-11 * g.volume() * v.max_abs().max(1.0));
    }

    #[test]
    fn projection_is_solenoidal_and_idempotent(t in [modes(), modes(), modes()]) {
        let g = common::grid(N);
        let v = trig_vec(&g, &t);
        let p = leray_project(&v);
        let tol = 1e-12 * v.max_abs().max(1.0);
        prop_assert!(divergence(&p).max_abs() <= tol);
        prop_assert!(common::vmax_diff(&leray_project(&p), &p) <= tol);
    }

    #[test]
    fn inverse_laplacian_inverts(terms in modes()) {
        let g = common::grid(N);
        let f = trig(&g, &terms);
        let f = &f - &ScalarField::constant(&g, f.mean());
        let back = laplacian(&inverse_laplacian_zero_mean(&f).unwrap());
        prop_assert!(common::max_diff(&back, &f) <= 1e-12 * scale(&f));
    }
}
