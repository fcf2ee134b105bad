use proptest::prelude::*;

use periodic_susy::exactnum::{gamma_f64, gamma_shift_ratio, int, rat, rising_factorial, to_f64, PolyQ, Rational};
use periodic_susy::hierarchy::{
    build_eigenstate, chain_residual, eigenstate_closed_form, energy_level, potential, spectrum_table, superpotential,
    HierarchySpec, Parity,
};
use periodic_susy::numverify::{count_nodes, Grid};
use periodic_susy::polyfactory::{
    laguerre_generalized_rodrigues, laguerre_series, ode_residual, recursion_residuals_cleared, D2Sign, OdeKind,
};
use periodic_susy::riccati::{riccati_residual, SuperpotentialRepr};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=30, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn poly() -> impl Strategy<Value = PolyQ> {
    prop::collection::vec(small_rational(), 0..6).prop_map(PolyQ::new)
}

/// Two gaps with `|α| < 1/2`, which any pair of positive gaps satisfies.
fn two_gaps() -> impl Strategy<Value = HierarchySpec> {
    (positive_rational(), positive_rational(), small_rational(), small_rational())
        .prop_map(|(a, b, e0, u0)| HierarchySpec::new(vec![a, b], e0, u0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &PolyQ::one(), a.clone());
        if !a.is_zero() && !b.is_zero() {
            prop_assert_eq!((&a * &b).degree(), a.degree() + b.degree());
        }
    }

    #[test]
    fn eval_is_a_homomorphism(a in poly(), b in poly(), x in small_rational()) {
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
        prop_assert_eq!(a.compose_square().eval(&x), a.eval(&(&x * &x)));
    }

    #[test]
    fn leibniz(a in poly(), b in poly()) {
        prop_assert_eq!((&a * &b).diff(), &(&a.diff() * &b) + &(&a * &b.diff()));
    }

    #[test]
    fn division_identity(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.degree() < b.degree());
    }

    #[test]
    fn gamma_recurrence(base in positive_rational(), k in 0usize..8) {
        let r = gamma_shift_ratio(&base, k).unwrap();
        prop_assert_eq!(r.clone(), rising_factorial(&base, k));
        prop_assert_eq!(gamma_shift_ratio(&base, k + 1).unwrap(), r * (&base + int(k as i64)));
        let x = to_f64(&base);
        let rel = (gamma_f64(x + 1.0) - x * gamma_f64(x)).abs() / gamma_f64(x + 1.0);
        prop_assert!(rel < 1e-12);
    }

    #[test]
    fn rodrigues_equals_series(gamma in small_rational(), p in 0usize..9) {
        let series = laguerre_series(&gamma, p);
        for sign in D2Sign::BOTH {
            prop_assert_eq!(laguerre_generalized_rodrigues(&gamma, p, sign), series.clone());
        }
        let ode = OdeKind::Laguerre { gamma: gamma.clone(), p };
        prop_assert!(ode_residual(&ode, &series).is_zero());
        prop_assert_eq!(series.degree(), p as isize);
    }

    #[test]
    fn recursions_vanish(gamma in small_rational(), p in 0usize..7) {
        for r in recursion_residuals_cleared(&gamma, p) {
            prop_assert!(r.residual.is_zero(), "{} at gamma {} p {}", r.name, gamma, p);
        }
    }

    #[test]
    fn spectrum_is_increasing_and_periodic(spec in two_gaps(), level in 1usize..5) {
        let t = spectrum_table(&spec, level, 9);
        prop_assert!(t.is_strictly_increasing());
        prop_assert!(t.is_periodic(&spec));
        // H_{λ+1} drops exactly the lowest level of H_λ
        for n in 0..8 {
            prop_assert_eq!(energy_level(&spec, level + 1, n), energy_level(&spec, level, n + 1));
        }
    }

    #[test]
    fn chain_closes(spec in two_gaps()) {
        let ws: Vec<_> = (1..=2).map(|l| superpotential(&spec, l).unwrap()).collect();
        prop_assert!(chain_residual(&ws, spec.gaps()).iter().all(|r| r.is_zero()));
        let u0 = spec.u0_f64();
        let grid = Grid::new(u0 - 4.0, u0 + 4.0, 801).unwrap().with_excluded_halfwidth(0.1);
        let reprs: Vec<&dyn SuperpotentialRepr> = ws.iter().map(|w| w as &dyn SuperpotentialRepr).collect();
        let gaps: Vec<f64> = spec.gaps().iter().map(to_f64).collect();
        // W² reaches c²x² near the edges and a²/x² near the excluded band
        let scale: f64 = 1.0
            + ws.iter().map(|w| 16.0 * to_f64(&w.linear_coeff).powi(2) + 100.0 * to_f64(&w.pole_coeff).powi(2)).sum::<f64>();
        prop_assert!(riccati_residual(&reprs, &gaps, &grid) < 1e-12 * scale);
    }

    #[test]
    fn cyclic_shift_covariance(spec in two_gaps()) {
        // Starting the hierarchy one level later swaps the gaps and the sign of α.
        let g = spec.gaps();
        let shifted = HierarchySpec::new(vec![g[1].clone(), g[0].clone()], spec.ground_energy(2), spec.u0().clone()).unwrap();
        prop_assert_eq!(shifted.alpha(), -spec.alpha());
        for level in 1..=2 {
            prop_assert_eq!(superpotential(&shifted, level).unwrap(), superpotential(&spec, level + 1).unwrap());
            prop_assert_eq!(potential(&shifted, level).unwrap(), potential(&spec, level + 1).unwrap());
            for n in 0..6 {
                prop_assert_eq!(energy_level(&shifted, level, n), energy_level(&spec, level + 1, n));
            }
        }
        for n in 0..8 {
            let a = build_eigenstate(&shifted, 1, n).unwrap();
            let b = build_eigenstate(&spec, 2, n).unwrap();
            prop_assert!(a.same_function(&b));
        }
    }

    #[test]
    fn ladder_matches_closed_form(spec in two_gaps(), level in 1usize..=2, n in 0usize..12) {
        let built = build_eigenstate(&spec, level, n).unwrap();
        prop_assert_eq!(built.clone(), eigenstate_closed_form(&spec, level, n).unwrap().to_state());
        prop_assert_eq!(built.parity, Parity::of(n));
        prop_assert!(built.norm2.to_f64() > 0.0);
    }

    #[test]
    fn node_law(spec in two_gaps(), level in 1usize..=2, n in 0usize..10) {
        let st = build_eigenstate(&spec, level, n).unwrap();
        let u0 = spec.u0_f64();
        let r = count_nodes(&st, &spec, (u0 - 60.0, u0 + 60.0)).unwrap();
        let extra = usize::from(st.parity == Parity::Even && st.sigma > int(0));
        prop_assert_eq!(r.zeros, n + extra);
    }
}
