use aggreason::connectives::{builtin_aggregation, Aggregation, BuiltinAggregation, Negation};
use aggreason::fuzzy::{jaccard, DiscreteFuzzySet, Universe};
use aggreason::implications::{BuiltinImplication, Implication};
use aggreason::inference::{acri_fmp, aqip_fmp, qip_objective_fmp};
use aggreason::numerics::{inf_satisfying, sup_satisfying, Tolerance};
use aggreason::residuation::{induced_aggregation, residual_implication};
use proptest::prelude::*;

fn unit() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0), Just(0.5), 0.0f64..=1.0]
}

fn aggregations() -> Vec<Aggregation> {
    BuiltinAggregation::NAMES
        .iter()
        .map(|&n| builtin_aggregation(n, if n == "clayton_copula" { &[2.0] } else { &[] }).unwrap())
        .collect()
}

fn implications() -> Vec<Implication> {
    BuiltinImplication::ALL.iter().map(|&b| Implication::from_builtin(b)).collect()
}

fn sets(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (proptest::collection::vec(unit(), n), proptest::collection::vec(unit(), n))
}

fn set(label: &str, values: Vec<f64>) -> DiscreteFuzzySet {
    let u = Universe::numbered(label, label, values.len()).unwrap();
    DiscreteFuzzySet::new(&u, values).unwrap()
}

/// Random FMP instance `(D, D', B)` with |U| = 1..=4, |V| = 1..=3.
fn instance() -> impl Strategy<Value = (DiscreteFuzzySet, DiscreteFuzzySet, DiscreteFuzzySet)> {
    (1usize..=4, 1usize..=3).prop_flat_map(|(n, m)| {
        (sets(n), proptest::collection::vec(unit(), m)).prop_map(|((d, dp), b)| {
            let u = Universe::numbered("U", "x", d.len()).unwrap();
            (DiscreteFuzzySet::new(&u, d).unwrap(), DiscreteFuzzySet::new(&u, dp).unwrap(), set("V", b))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sup_and_inf_agree_with_a_linear_scan(p in 0.2f64..5.0, y in 0.0f64..=1.0) {
        let g = |z: f64| z.powf(p);
        let tol = Tolerance::default();
        let sup = sup_satisfying(|z| g(z) <= y, &tol).unwrap().get();
        let inf = inf_satisfying(|z| g(z) >= y, &tol).unwrap().get();
        let n = 100_000;
        let step = 1.0 / n as f64;
        let scan_sup = (0..=n).map(|k| k as f64 * step).filter(|&z| g(z) <= y).fold(0.0, f64::max);
        let scan_inf = (0..=n).map(|k| k as f64 * step).filter(|&z| g(z) >= y).fold(1.0, f64::min);
        prop_assert!((sup - scan_sup).abs() <= tol.eps() + step);
        prop_assert!((inf - scan_inf).abs() <= tol.eps() + step);
        prop_assert_eq!(sup.to_bits(), sup_satisfying(|z| g(z) <= y, &tol).unwrap().get().to_bits());
    }

    #[test]
    fn builtin_aggregations_are_monotone(x1 in unit(), x2 in unit(), y1 in unit(), y2 in unit()) {
        let (xl, xh) = (x1.min(x2), x1.max(x2));
        let (yl, yh) = (y1.min(y2), y1.max(y2));
        for a in aggregations() {
            prop_assert!(a.eval(xl, yl) <= a.eval(xh, yh) + 1e-12, "{}", a.name());
            prop_assert_eq!(a.eval(0.0, 0.0), 0.0);
            prop_assert_eq!(a.eval(1.0, 1.0), 1.0);
        }
    }

    #[test]
    fn builtin_implications_satisfy_the_axioms(x1 in unit(), x2 in unit(), y1 in unit(), y2 in unit()) {
        let (xl, xh) = (x1.min(x2), x1.max(x2));
        let (yl, yh) = (y1.min(y2), y1.max(y2));
        for i in implications() {
            prop_assert!(i.eval(xl, y1) >= i.eval(xh, y1) - 1e-12, "{} not antitone in x", i.name());
            prop_assert!(i.eval(x1, yl) <= i.eval(x1, yh) + 1e-12, "{} not monotone in y", i.name());
            prop_assert_eq!(i.eval(0.0, 0.0), 1.0);
            prop_assert_eq!(i.eval(1.0, 1.0), 1.0);
            prop_assert_eq!(i.eval(1.0, 0.0), 0.0);
            // LB and RB
            prop_assert_eq!(i.eval(0.0, y1), 1.0);
            prop_assert_eq!(i.eval(x1, 1.0), 1.0);
        }
    }

    #[test]
    fn residuals_are_monotone_even_without_certificate(x1 in unit(), x2 in unit(), y1 in unit(), y2 in unit()) {
        let (xl, xh) = (x1.min(x2), x1.max(x2));
        let (yl, yh) = (y1.min(y2), y1.max(y2));
        for name in ["max", "arithmetic_mean", "probabilistic_sum", "product", "drastic_tnorm"] {
            let i = residual_implication(&builtin_aggregation(name, &[]).unwrap());
            prop_assert!(i.eval(xl, y1) >= i.eval(xh, y1) - 1e-9, "{name} not antitone");
            prop_assert!(i.eval(x1, yl) <= i.eval(x1, yh) + 1e-9, "{name} not monotone");
        }
    }

    #[test]
    fn induced_aggregations_have_annihilator_zero(x in unit()) {
        for i in implications() {
            if let Ok(a) = induced_aggregation(&i) {
                prop_assert_eq!(a.eval(0.0, x), 0.0, "{}", i.name());
                prop_assert_eq!(a.eval(x, 0.0), 0.0, "{}", i.name());
            }
        }
    }

    #[test]
    fn standard_complement_is_an_involution(values in proptest::collection::vec(unit(), 1..8)) {
        let d = set("U", values);
        let n = Negation::standard();
        prop_assert!(d.complement(&n).complement(&n).approx_eq(&d, 1e-15).unwrap());
    }

    #[test]
    fn jaccard_is_a_symmetric_unit_score((a, b) in (1usize..6).prop_flat_map(sets)) {
        let s = jaccard(&a, &b);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(s, jaccard(&b, &a));
        prop_assert_eq!(jaccard(&a, &a), 1.0);
    }

    #[test]
    fn acri_is_monotone_in_the_premise((d, dp, b) in instance(), bump in proptest::collection::vec(unit(), 4)) {
        let grown = DiscreteFuzzySet::new(
            dp.universe(),
            dp.values().iter().zip(&bump).map(|(&v, &e)| v.max(e)).collect(),
        ).unwrap();
        for a in aggregations() {
            for i in [Implication::goguen(), Implication::kleene_dienes()] {
                let small = acri_fmp(&dp, &d, &b, &a, &i).unwrap();
                let big = acri_fmp(&grown, &d, &b, &a, &i).unwrap();
                prop_assert!(small.is_subset_of(&big).unwrap(), "{} / {}", a.name(), i.name());
            }
        }
    }

    #[test]
    fn aqip_conclusion_is_below_the_consequent((d, dp, b) in instance()) {
        for i in [Implication::goguen(), Implication::godel()] {
            let out = aqip_fmp(&dp, &d, &b, &i).unwrap().conclusion;
            prop_assert!(out.is_subset_of(&b).unwrap(), "{}: B' = {out}, B = {b}", i.name());
        }
    }

    #[test]
    fn aqip_reaches_objective_one((d, dp, b) in instance()) {
        let g = Implication::goguen();
        let out = aqip_fmp(&dp, &d, &b, &g).unwrap().conclusion;
        for x in d.universe().labels() {
            for y in b.universe().labels() {
                prop_assert_eq!(qip_objective_fmp(&dp, &d, &b, &out, &g, x, y).unwrap().get(), 1.0);
            }
        }
    }
}
