use std::sync::Arc;

use gls_core::convexity::{
    delta_lp_closed_form, delta_lp_exact, delta_lp_implicit, delta_lp_lower_bound, refined_triangle_check,
};
use gls_core::moc::{empirical_moc, MocTarget, Strategy as MocStrategy};
use gls_core::sampling::SamplerConfig;
use gls_core::{GlSpaceF64, MeasurePartitionF64, PsiSpecF64, SimpleFunctionF64};
use proptest::prelude::*;

fn values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0..50.0f64, n)
}

/// Unit-mass partition with 1..=12 cells.
fn partition() -> impl Strategy<Value = Arc<MeasurePartitionF64>> {
    prop::collection::vec(0.01..1.0f64, 1..=12).prop_map(|raw| {
        let total: f64 = raw.iter().sum();
        Arc::new(MeasurePartitionF64::new(raw.into_iter().map(|w| w / total).collect()).unwrap())
    })
}

fn function() -> impl Strategy<Value = SimpleFunctionF64> {
    partition().prop_flat_map(|part| {
        let n = part.len();
        values(n).prop_map(move |v| SimpleFunctionF64::new(Arc::clone(&part), v).unwrap())
    })
}

fn function_pair() -> impl Strategy<Value = (SimpleFunctionF64, SimpleFunctionF64)> {
    partition().prop_flat_map(|part| {
        let n = part.len();
        (values(n), values(n)).prop_map(move |(u, v)| {
            (
                SimpleFunctionF64::new(Arc::clone(&part), u).unwrap(),
                SimpleFunctionF64::new(Arc::clone(&part), v).unwrap(),
            )
        })
    })
}

fn nonzero_function() -> impl Strategy<Value = SimpleFunctionF64> {
    function().prop_filter("nonzero", |f| f.ess_sup() > 1e-6)
}

/// Half of the mass sits on an atom attaining the essential supremum, so that
/// `||f||_p` reaches `ess_sup` at rate `ln 2 / p`.
fn heavy_peak_function() -> impl Strategy<Value = SimpleFunctionF64> {
    function().prop_map(|f| {
        let mut atoms: Vec<(f64, f64)> = f.atoms().map(|(w, v)| (0.5 * w, v)).collect();
        atoms.push((0.5, f.ess_sup()));
        SimpleFunctionF64::from_atoms(&atoms).unwrap()
    })
}

fn psi_space() -> impl Strategy<Value = GlSpaceF64> {
    prop_oneof![
        Just(GlSpaceF64::new(PsiSpecF64::constant(1.2, 2.0, 1.0).unwrap())),
        Just(GlSpaceF64::new(PsiSpecF64::power_root(1.0, f64::INFINITY, 2.0).unwrap())),
        Just(GlSpaceF64::new(PsiSpecF64::power_root(2.5, 8.0, 2.0).unwrap())),
        Just(GlSpaceF64::new(PsiSpecF64::endpoint_singular(1.2, 2.0, 1.0, 0.5).unwrap())),
        Just(GlSpaceF64::new(PsiSpecF64::extremal(1.0, 6.0, 3.0).unwrap())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lp_homogeneity(f in function(), c in -20.0..20.0f64, p in 1.0..40.0f64) {
        let lhs = f.scale(c).lp_norm(p).unwrap();
        let rhs = c.abs() * f.lp_norm(p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    #[test]
    fn lp_triangle((f, g) in function_pair(), p in 1.0..40.0f64) {
        let s = f.add(&g).unwrap().lp_norm(p).unwrap();
        prop_assert!(s <= f.lp_norm(p).unwrap() + g.lp_norm(p).unwrap() + 1e-12 * (1.0 + s));
    }

    #[test]
    fn lp_tends_to_ess_sup(f in heavy_peak_function()) {
        let m = f.ess_sup();
        let gaps: Vec<f64> = (0..=20).map(|k| (f.lp_norm(2f64.powi(k)).unwrap() - m).abs()).collect();
        prop_assert!(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12 * (1.0 + m)));
        prop_assert!(gaps[20] <= 1e-6 * (1.0 + m));
    }

    #[test]
    fn lyapunov_on_unit_mass(f in function()) {
        let grid: Vec<f64> = (0..400).map(|i| 1.0 + 0.05 * i as f64).collect();
        prop_assert!(f.lyapunov_monotone(&grid).unwrap().monotone);
    }

    #[test]
    fn gls_homogeneity_and_triangle(space in psi_space(), (f, g) in function_pair(), c in -10.0..10.0f64) {
        let nf = space.norm(&f).value;
        prop_assert!((space.norm(&f.scale(c)).value - c.abs() * nf).abs() <= 1e-9 * (c.abs() * nf).max(1e-300));
        let s = space.norm(&f.add(&g).unwrap()).value;
        prop_assert!(s <= nf + space.norm(&g).value + 1e-9 * (1.0 + s));
    }

    #[test]
    fn kappa_scaling_and_domination(space in psi_space(), u in function(), c in 0.01..10.0f64) {
        let k = space.kappa(&u).value();
        let kc = space.kappa(&u.scale(c)).value();
        prop_assert!((kc - c * c * k).abs() <= 1e-9 * (c * c * k).max(1e-300));
        let n = space.norm(&u).value;
        prop_assert!(k <= n * n + 1e-9);
    }

    #[test]
    fn natural_psi_gives_unit_norm(f in nonzero_function()) {
        for (a, b) in [(1.0, 2.0), (2.5, 8.0), (1.0, f64::INFINITY)] {
            let space = GlSpaceF64::new(PsiSpecF64::natural(&f, a, b).unwrap());
            prop_assert!((space.norm(&f).value - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn extremal_space_is_lr(f in function(), r in 1.0..6.0f64) {
        let space = GlSpaceF64::new(PsiSpecF64::extremal(1.0, 6.0, r).unwrap());
        prop_assert_eq!(space.norm(&f).value, f.lp_norm(r).unwrap());
    }

    #[test]
    fn theta_grows_with_scale_in_small_regime(u in nonzero_function()) {
        let space = GlSpaceF64::new(PsiSpecF64::constant(2.5, 8.0, 1.0).unwrap());
        // Keep ||u||_p / (2ψ) ≤ 1 on the whole interval after the 1.1 scaling.
        let u = u.scale(1.0 / (1.1 * u.ess_sup()));
        prop_assert!(space.theta(&u.scale(1.1)).value() >= space.theta(&u).value() - 1e-15);
    }

    #[test]
    fn branch_agreement_at_two(eps in 0.0..=2.0f64) {
        let a = delta_lp_closed_form(2.0, eps).unwrap();
        let b = delta_lp_implicit(2.0, eps).unwrap().delta;
        prop_assert!((a - b).abs() <= 1e-10);
    }

    #[test]
    fn modulus_dominates_lower_bound(p in 1.01..12.0f64, eps in 0.0..=2.0f64) {
        let d = delta_lp_exact(p, eps).unwrap();
        prop_assert!((0.0..=1.0).contains(&d.delta));
        prop_assert!(d.delta >= delta_lp_lower_bound(p, eps).unwrap() - 1e-12);
    }

    #[test]
    fn refined_triangle_on_ball((f, g) in function_pair(), p in 1.05..10.0f64, rx in 0.0..1.0f64, ry in 0.0..1.0f64) {
        prop_assume!(f.ess_sup() > 0.0 && g.ess_sup() > 0.0);
        let x = f.scale(rx / f.lp_norm(p).unwrap());
        let y = g.scale(ry / g.lp_norm(p).unwrap());
        prop_assert!(refined_triangle_check(&x, &y, p).unwrap().slack >= -1e-9);
    }
}

#[test]
fn modulus_is_monotone_in_eps() {
    for p in [1.1, 1.5, 2.0, 3.0, 6.0, 10.0] {
        let d: Vec<f64> = (0..=200).map(|i| delta_lp_exact(p, i as f64 / 100.0).unwrap().delta).collect();
        assert!(d.windows(2).all(|w| w[1] >= w[0] - 1e-12), "p = {p}");
        assert_eq!(d[0], 0.0);
    }
}

#[test]
fn random_moc_is_an_upper_estimate() {
    let sampler = SamplerConfig { atoms_min: 2, atoms_max: 8 };
    for p in [1.5, 2.0, 3.0] {
        for eps in [0.25, 0.5, 1.0] {
            let est =
                empirical_moc(MocTarget::Lp(p), eps, MocStrategy::Random { trials: 500, seed: 3 }, &sampler).unwrap();
            assert!(est.result.delta >= delta_lp_exact(p, eps).unwrap().delta - 1e-9, "p={p} eps={eps}");
        }
    }
}
