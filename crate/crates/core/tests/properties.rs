//! Property tests over randomized states.

use proptest::prelude::*;

use swsplit::domain::{make_grid, Bathymetry, Field, State};
use swsplit::flux::{abs_q_matrix, numerical_flux, physical_flux, upwind_matrices, Mat2};

const G: f64 = 9.81;

proptest! {
    #[test]
    fn numerical_flux_is_consistent(h in 0.05f64..10.0, u in -3.0f64..3.0) {
        let w = State::new(h, h * u);
        let phi = numerical_flux(w, w, G).unwrap();
        let f = physical_flux(w, G).unwrap();
        for k in 0..2 {
            prop_assert!((phi[k] - f[k]).abs() <= 1e-12 * (1.0 + f[k].abs()));
        }
    }

    #[test]
    fn upwind_projectors_sum_to_twice_identity(
        hu in 0.05f64..10.0, hv in 0.05f64..10.0,
        uu in -3.0f64..3.0, uv in -3.0f64..3.0,
    ) {
        let (u, v) = (State::new(hu, hu * uu), State::new(hv, hv * uv));
        let mean = State::mean(u, v);
        let c = (G * mean.h).sqrt();
        let um = mean.q / mean.h;
        prop_assume!((um + c).abs() > 1e-3 * c && (um - c).abs() > 1e-3 * c);
        let (dl, dr) = upwind_matrices(u, v, G).unwrap();
        prop_assert!(dl.add(&dr).max_abs_diff(&Mat2::diag(2.0, 2.0)) <= 1e-12);
    }

    #[test]
    fn mass_flux_has_mirror_antisymmetry(
        ha in 0.05f64..10.0, hb in 0.05f64..10.0,
        ua in -3.0f64..3.0, ub in -3.0f64..3.0,
    ) {
        let (qa, qb) = (ha * ua, hb * ub);
        let lhs = numerical_flux(State::new(ha, -qa), State::new(hb, -qb), G).unwrap();
        let rhs = numerical_flux(State::new(hb, qb), State::new(ha, qa), G).unwrap();
        let scale = 1.0 + lhs[0].abs().max(rhs[0].abs());
        prop_assert!((lhs[0] + rhs[0]).abs() <= 1e-12 * scale);
    }

    #[test]
    fn rest_pairs_make_abs_q_a_scaled_identity(
        ha in 0.05f64..10.0, hb in 0.05f64..10.0,
    ) {
        // equal-surface rest pairs over flat segments: u = v = 0
        let m = abs_q_matrix(State::new(ha, 0.0), State::new(hb, 0.0), G).unwrap();
        let c = (G * 0.5 * (ha + hb)).sqrt();
        prop_assert!(m.max_abs_diff(&Mat2::diag(c, c)) <= 1e-12 * (1.0 + c));
    }

    #[test]
    fn free_surface_is_linear_in_constant_shifts(
        depths in prop::collection::vec(0.1f64..5.0, 8),
        c in 0.0f64..3.0,
    ) {
        let grid = make_grid(0.0, 1.0, 8).unwrap();
        let b: Vec<f64> = (0..8).map(|j| 0.01 * j as f64).collect();
        let states: Vec<State<f64>> = depths.iter().map(|&h| State::new(h, 0.0)).collect();
        let shifted: Vec<State<f64>> = depths.iter().map(|&h| State::new(h + c, 0.0)).collect();
        let f0 = Field::new(grid.clone(), states, Bathymetry::from_values(b.clone())).unwrap();
        let f1 = Field::new(grid, shifted, Bathymetry::from_values(b)).unwrap();
        for (a, b) in f0.free_surface().iter().zip(f1.free_surface()) {
            prop_assert!((a + c - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }
}
