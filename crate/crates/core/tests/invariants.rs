use fschro_core::fit::fit_log_log;
use fschro_core::grid::{hs_seminorm, inverse_spectral, l2_norm, spectral_coefficients};
use fschro_core::mollifier::{friedrichs_mollifier, regularize_potential};
use fschro_core::observables::window_mass;
use fschro_core::operators::{fractional_laplacian, free_propagator};
use fschro_core::solver::{cn_step, strang_step};
use fschro_core::{
    Boundary, Complex64, ComplexField, Epsilon, FractionalOrder, Grid, Mollifier, PotentialKind, PotentialSpec,
    RealField, RegularizedPotential,
};
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = ComplexField> {
    (3u32..9).prop_flat_map(|log_n| {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1usize << log_n).prop_map(move |v| {
            let grid = Grid::new(0.0, 10.0, 1 << log_n).unwrap();
            ComplexField::new(grid, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
        })
    })
}

fn field_pair_strategy() -> impl Strategy<Value = (ComplexField, ComplexField)> {
    (3u32..9).prop_flat_map(|log_n| {
        let n = 1usize << log_n;
        let side = || proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n);
        (side(), side()).prop_map(move |(a, b)| {
            let grid = Grid::new(-3.0, 7.0, n).unwrap();
            let make = |v: Vec<(f64, f64)>| {
                ComplexField::new(grid, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
            };
            (make(a), make(b))
        })
    })
}

fn potential_on(grid: Grid, values: &[f64]) -> RegularizedPotential {
    let field = RealField::new(grid, values.to_vec()).unwrap();
    RegularizedPotential::from_field(
        PotentialSpec::standard(PotentialKind::HarmonicShifted),
        Epsilon::new(1.0).unwrap(),
        field,
    )
    .unwrap()
}

fn max_diff(a: &ComplexField, b: &ComplexField) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn orders() -> impl Strategy<Value = FractionalOrder> {
    (0.1f64..2.0).prop_map(|s| FractionalOrder::new(s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_nodes_tile_the_period(log_n in 3u32..14, x_min in -20.0f64..20.0, length in 0.5f64..50.0) {
        let g = Grid::new(x_min, x_min + length, 1 << log_n).unwrap();
        let nodes = g.nodes();
        prop_assert!(nodes.windows(2).all(|w| w[1] > w[0]));
        prop_assert!((nodes[nodes.len() - 1] + g.dx() - g.x_max()).abs() < 1e-12 * length.max(x_min.abs()));
    }

    #[test]
    fn grid_rejects_non_powers_of_two(n in 0usize..5000) {
        prop_assume!(!(n.is_power_of_two() && n >= 8));
        prop_assert!(Grid::new(0.0, 1.0, n).is_err());
    }

    #[test]
    fn spectral_round_trip(f in field_strategy()) {
        let back = inverse_spectral(&spectral_coefficients(&f));
        prop_assert!(max_diff(&back, &f) <= 1e-12 * l2_norm(&f).max(1e-300) / f.grid().dx().sqrt());
    }

    #[test]
    fn plancherel(f in field_strategy()) {
        let norm = l2_norm(&f);
        prop_assert!((l2_norm(&spectral_coefficients(&f)) - norm).abs() <= 1e-12 * norm);
    }

    #[test]
    fn l2_norm_is_a_norm((f, g) in field_pair_strategy(), re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let c = Complex64::new(re, im);
        let scaled = l2_norm(&f.scale(c));
        prop_assert!((scaled - c.norm() * l2_norm(&f)).abs() <= 1e-13 * scaled.max(1e-300));
        let sum = l2_norm(&f.add(&g).unwrap());
        prop_assert!(sum <= (l2_norm(&f) + l2_norm(&g)) * (1.0 + 1e-14));
    }

    #[test]
    fn laplacian_is_self_adjoint((f, g) in field_pair_strategy(), order in orders()) {
        let lf = fractional_laplacian(&f, order);
        let lg = fractional_laplacian(&g, order);
        let left = lf.inner(&g).unwrap();
        let right = f.inner(&lg).unwrap();
        let scale = l2_norm(&lf) * l2_norm(&g) + l2_norm(&f) * l2_norm(&lg);
        prop_assert!((left - right).norm() <= 1e-10 * scale);
    }

    #[test]
    fn seminorm_is_the_quadratic_form(f in field_strategy(), order in orders()) {
        let hs = hs_seminorm(&f, order.get());
        let form = fractional_laplacian(&f, order).inner(&f).unwrap();
        prop_assert!((hs * hs - form.re).abs() <= 1e-10 * hs * hs);
        prop_assert!(form.im.abs() <= 1e-10 * hs * hs);
    }

    #[test]
    fn propagator_is_a_group_at_moderate_phase(f in field_strategy(), t1 in -0.3f64..0.3, t2 in -0.3f64..0.3) {
        let order = FractionalOrder::new(0.5).unwrap();
        let composed = free_propagator(&free_propagator(&f, t2, order), t1, order);
        prop_assert!(max_diff(&composed, &free_propagator(&f, t1 + t2, order)) < 1e-12);
        let back = free_propagator(&free_propagator(&f, -t1, order), t1, order);
        prop_assert!(max_diff(&back, &f) < 1e-12);
    }

    #[test]
    fn propagator_is_a_unitary_group(f in field_strategy(), order in orders(), t1 in -2.0f64..2.0, t2 in -2.0f64..2.0) {
        // Phases |ξ|^{2s} t are only represented to relative rounding, so the
        // bound grows with the largest phase applied.
        let xi_max = std::f64::consts::PI / f.grid().dx();
        let tol = 1e-12 * (1.0 + xi_max.powf(2.0 * order.get()) * (t1.abs() + t2.abs()));
        let composed = free_propagator(&free_propagator(&f, t2, order), t1, order);
        let direct = free_propagator(&f, t1 + t2, order);
        prop_assert!(max_diff(&composed, &direct) < tol);
        let back = free_propagator(&free_propagator(&f, -t1, order), t1, order);
        prop_assert!(max_diff(&back, &f) < tol);
        prop_assert!((l2_norm(&direct) - l2_norm(&f)).abs() < 1e-12 * l2_norm(&f).max(1.0));
    }

    #[test]
    fn cn_step_preserves_norm(f in field_strategy(), dt in 1e-4f64..0.5, seed in proptest::collection::vec(0.0f64..50.0, 256)) {
        let grid = *f.grid();
        let p = potential_on(grid, &seed[..grid.len()]);
        let norm = l2_norm(&f);
        let periodic = cn_step(&f, &p, dt, Boundary::Periodic).unwrap();
        prop_assert!((l2_norm(&periodic) - norm).abs() <= 1e-12 * norm);
        let mut pinned = f.values().to_vec();
        pinned[0] = Complex64::new(0.0, 0.0);
        let pinned = ComplexField::new(grid, pinned).unwrap();
        let dirichlet = cn_step(&pinned, &p, dt, Boundary::Dirichlet).unwrap();
        prop_assert!((l2_norm(&dirichlet) - l2_norm(&pinned)).abs() <= 1e-12 * norm);
    }

    #[test]
    fn strang_step_preserves_norm(f in field_strategy(), dt in 1e-4f64..0.5, order in orders(), seed in proptest::collection::vec(0.0f64..50.0, 256)) {
        let p = potential_on(*f.grid(), &seed[..f.grid().len()]);
        let norm = l2_norm(&f);
        prop_assert!((l2_norm(&strang_step(&f, &p, dt, order).unwrap()) - norm).abs() <= 1e-12 * norm);
    }

    #[test]
    fn window_mass_is_additive(f in field_strategy(), a in 0.0f64..3.0, b in 3.0f64..6.0, c in 6.0f64..10.0) {
        let whole = window_mass(&f, a, c);
        let parts = window_mass(&f, a, b) + window_mass(&f, b, c);
        prop_assert!((whole - parts).abs() <= 1e-12 * whole.max(1e-300));
    }

    #[test]
    fn mollifier_is_even(x in -1.5f64..1.5) {
        let m = Mollifier::standard();
        prop_assert_eq!(friedrichs_mollifier(x, &m), friedrichs_mollifier(-x, &m));
    }

    #[test]
    fn regularized_potentials_are_admissible(kind_index in 0usize..5, eps in 0.02f64..1.0) {
        let kind = PotentialKind::ALL[kind_index];
        let spec = PotentialSpec::standard(kind);
        let g = Grid::new(-2.0, 14.0, 2048).unwrap();
        let p = regularize_potential(&spec, Epsilon::new(eps).unwrap(), &g, &Mollifier::standard()).unwrap();
        prop_assert!(p.values().iter().all(|&v| v >= 0.0));
        if kind.is_singular() {
            for (j, &v) in p.values().iter().enumerate() {
                let x = g.node(j);
                if v > 0.0 {
                    prop_assert!((x - spec.site()).abs() <= eps);
                }
            }
        }
        if kind == PotentialKind::Delta {
            prop_assert!((p.field().integral() - spec.weight()).abs() < 1e-6);
        }
    }

    #[test]
    fn power_laws_fit_exactly(slope in -3.0f64..3.0, log_c in -5.0f64..5.0) {
        let points: Vec<(f64, f64)> = [0.8, 0.4, 0.2, 0.1, 0.05]
            .iter()
            .map(|&x: &f64| (x, log_c.exp() * x.powf(slope)))
            .collect();
        let fit = fit_log_log(points).unwrap();
        prop_assert!((fit.slope - slope).abs() < 1e-10);
        prop_assert!(fit.rms_residual < 1e-10);
        prop_assert!(!fit.is_flagged());
    }
}

fn singular(kind: PotentialKind, eps: f64, grid: &Grid) -> RegularizedPotential {
    regularize_potential(
        &PotentialSpec::standard(kind),
        Epsilon::new(eps).unwrap(),
        grid,
        &Mollifier::standard(),
    )
    .unwrap()
}

#[test]
fn delta_sup_norm_decreases_in_epsilon() {
    let g = Grid::new(0.0, 10.0, 1024).unwrap();
    let sups: Vec<f64> = [0.035, 0.05, 0.08, 0.11, 0.15, 0.3, 0.4, 0.8]
        .iter()
        .map(|&e| singular(PotentialKind::Delta, e, &g).sup_norm())
        .collect();
    assert!(sups.windows(2).all(|w| w[0] > w[1]), "{sups:?}");
}

#[test]
fn delta_squared_sup_norm_scales_quadratically() {
    // The site is a node and the kernel is resolved by many nodes.
    let g = Grid::new(-2.0, 14.0, 1 << 14).unwrap();
    for eps in [0.05, 0.1, 0.2] {
        let ratio = singular(PotentialKind::DeltaSquared, eps, &g).sup_norm()
            / singular(PotentialKind::DeltaSquared, 2.0 * eps, &g).sup_norm();
        assert!((ratio - 4.0).abs() < 1e-6, "eps {eps}: {ratio}");
    }
}

#[test]
fn delta_is_symmetric_about_a_node_site() {
    let g = Grid::new(-2.0, 14.0, 1024).unwrap();
    let site = ((3.0 - g.x_min()) / g.dx()).round() as usize;
    assert!((g.node(site) - 3.0).abs() < 1e-12);
    for eps in [0.05, 0.3] {
        let p = singular(PotentialKind::Delta, eps, &g);
        for k in 1..40 {
            assert!((p.values()[site + k] - p.values()[site - k]).abs() < 1e-12);
        }
    }
}
