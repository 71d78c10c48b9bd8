use aggreason::connectives::{classify, Aggregation, BuiltinAggregation};
use aggreason::fuzzy::{jaccard, DiscreteFuzzySet, SimilarityMeasure, Universe};
use aggreason::implications::{check_implication_properties, pointwise_leq, BuiltinImplication, Implication};
use aggreason::inference::{
    acri_fmp, asbr_conclude, check_gmp2_prime, fati, fita, verify_qip_fmt_optimality, verify_qip_optimality, aqip_fmp,
    aqip_fmt, Arrow, MisoRule, RuleBase,
};
use aggreason::numerics::Grid;
use aggreason::residuation::{induced_aggregation, roundtrip_check};
use aggreason::validity::{
    check_rule, default_configs, sample_instance, verdict_report, HypothesisConfig, Method, Requirement, Rule, RuleVerdict,
    Sampling, Source, Verdict,
};

use Requirement::*;

fn run(method: Method, a: Option<&str>, i: &str, rule: Rule, reqs: &[Requirement]) -> RuleVerdict {
    let mut cfg = HypothesisConfig::new(method, &[rule]).implication(i).require(reqs);
    if let Some(a) = a {
        cfg = cfg.aggregation(a);
    }
    check_rule(&cfg, rule).unwrap()
}

fn passes(method: Method, a: Option<&str>, i: &str, rule: Rule, reqs: &[Requirement]) {
    let v = run(method, a, i, rule, reqs);
    assert_eq!(v.verdict, Verdict::Pass, "{method:?} {a:?} {i} {rule}: {:?}", v.counterexample);
    assert!(v.checked >= 500);
}

fn fails(method: Method, a: Option<&str>, i: &str, rule: Rule, reqs: &[Requirement]) -> RuleVerdict {
    let v = run(method, a, i, rule, reqs);
    assert_eq!(v.verdict, Verdict::Fail, "{method:?} {a:?} {i} {rule}");
    v
}

#[test]
fn acri_with_induced_aggregation() {
    // I(1, .) strictly increasing
    for i in ["goguen", "lukasiewicz", "kleene_dienes", "reichenbach"] {
        let a = format!("induced({i})");
        passes(Method::Acri, Some(&a), i, Rule::Gmp1, &[DprimeNormal]);
        passes(Method::Acri, Some(&a), i, Rule::Gmp3, &[DcomplementNormal]);
        passes(Method::Acri, Some(&a), i, Rule::Gmp4, &[DNormal]);
    }
}

#[test]
fn acri_gmp2_holds_for_any_aggregation() {
    for a in ["arithmetic_mean", "max", "drastic_tnorm", "projection_second", "geometric_mean"] {
        passes(Method::Acri, Some(a), "kleene_dienes", Rule::Gmp2, &[]);
    }
}

#[test]
fn acri_rules_follow_pointwise_order_with_the_residual() {
    let grid = Grid::new(101).unwrap();
    let goguen = Implication::goguen();
    // godel <= goguen, so product with godel keeps GMP1-4
    assert!(pointwise_leq(&Implication::godel(), &goguen, &grid).holds);
    for rule in [Rule::Gmp1, Rule::Gmp2, Rule::Gmp3, Rule::Gmp4] {
        passes(Method::Acri, Some("product"), "godel", rule, &[DprimeNormal, DcomplementNormal]);
    }
    assert!(!pointwise_leq(&Implication::kleene_dienes(), &goguen, &grid).holds);
    let v = fails(Method::Acri, Some("product"), "kleene_dienes", Rule::Gmp4, &[DprimeNormal, DcomplementNormal]);
    assert!(v.counterexample.unwrap().detail.starts_with("D' = D"));
}

#[test]
fn single_rule_fita_equals_fati() {
    let u = Universe::numbered("U", "x", 4).unwrap();
    let v = Universe::numbered("V", "y", 3).unwrap();
    let d = DiscreteFuzzySet::new(&u, vec![0.2, 1.0, 0.6, 0.0]).unwrap();
    let b = DiscreteFuzzySet::new(&v, vec![0.3, 0.9, 0.5]).unwrap();
    let x = DiscreteFuzzySet::new(&u, vec![0.7, 0.4, 1.0, 0.1]).unwrap();
    let rb = RuleBase::new(vec![MisoRule::new(vec![d.clone()], b.clone())], Aggregation::min()).unwrap();
    let (a, comb) = (Aggregation::product(), Aggregation::min());
    let arrow = Arrow::Implication(Implication::goguen());
    let one = fita(std::slice::from_ref(&x), &rb, &a, &arrow, &comb).unwrap();
    assert!(one.approx_eq(&fati(std::slice::from_ref(&x), &rb, &a, &arrow, &comb).unwrap(), 1e-15).unwrap());
    assert!(one.approx_eq(&acri_fmp(&x, &d, &b, &a, &Implication::goguen()).unwrap(), 1e-15).unwrap());
}

#[test]
fn similarity_schemes_gmp1() {
    let normal = [DNormal];
    // left neutral 1 with NP
    passes(Method::Asbr1, Some("product"), "goguen", Rule::Gmp1, &normal);
    // right-continuous I with NP, any A
    passes(Method::Asbr2, Some("arithmetic_mean"), "kleene_dienes", Rule::Gmp1, &normal);
    // left neutral 0, any I
    passes(Method::Asbr3, Some("max"), "kleene_dienes", Rule::Gmp1, &normal);
    passes(Method::Asbr3, Some("projection_second"), "rescher_gaines", Rule::Gmp1, &normal);
    // right-continuous with left neutral 0
    passes(Method::Asbr4, Some("max"), "kleene_dienes", Rule::Gmp1, &normal);
    // without NP scheme 1 loses GMP1
    fails(Method::Asbr1, Some("product"), "rescher_gaines", Rule::Gmp1, &normal);
}

#[test]
fn scheme_four_gmp1_needs_more_than_a_left_neutral_zero() {
    // max is right-continuous with left neutral 0, yet rescher_gaines has
    // I(1, y) = 0 < y, so the x with D(x) = 1 pulls B'_4(y) down to s
    let v = fails(Method::Asbr4, Some("max"), "rescher_gaines", Rule::Gmp1, &[DNormal]);
    let ce = v.counterexample.unwrap();
    let u = Universe::new("U", ce.instance.u.clone()).unwrap();
    let s = jaccard(
        DiscreteFuzzySet::from_pairs(&u, ce.instance.d.iter().map(|(l, &x)| (l.as_str(), x))).unwrap().values(),
        DiscreteFuzzySet::from_pairs(&u, ce.instance.dprime.iter().map(|(l, &x)| (l.as_str(), x))).unwrap().values(),
    );
    let at = ce.conclusion.get(&ce.at).copied().unwrap_or(0.0);
    assert!((at - s).abs() < 1e-12, "B'_4 = {at}, s = {s}");
}

#[test]
fn gmp2_prime_for_schemes_one_and_two() {
    for scheme in [1, 2] {
        for i in ["goguen", "godel", "kleene_dienes"] {
            let v = check_gmp2_prime("product", i, scheme, &Sampling::default()).unwrap();
            assert_eq!(v.verdict, Verdict::Pass, "scheme {scheme}, {i}: {:?}", v.counterexample);
        }
    }
}

#[test]
fn schemes_three_and_four_gmp2_depends_on_the_similarity() {
    // projection_second ignores s, so D' ⊆ D'' carries through
    passes(Method::Asbr3, Some("projection_second"), "goguen", Rule::Gmp2, &[DNormal]);
    passes(Method::Asbr4, Some("projection_second"), "goguen", Rule::Gmp2, &[DNormal]);
    // D' ⊆ D'' does not give S(D, D') <= S(D, D''); product exposes it
    fails(Method::Asbr3, Some("product"), "goguen", Rule::Gmp2, &[DNormal]);
    fails(Method::Asbr4, Some("product"), "goguen", Rule::Gmp2, &[DNormal]);
    fails(Method::Asbr3, Some("min"), "kleene_dienes", Rule::Gmp2, &[DNormal]);

    let u = Universe::numbered("U", "x", 2).unwrap();
    let v = Universe::numbered("V", "y", 1).unwrap();
    let d = DiscreteFuzzySet::new(&u, vec![1.0, 0.0]).unwrap();
    let dpp = DiscreteFuzzySet::new(&u, vec![1.0, 1.0]).unwrap();
    let b = DiscreteFuzzySet::new(&v, vec![1.0]).unwrap();
    let (p, g, j) = (Aggregation::product(), Implication::goguen(), SimilarityMeasure::jaccard());
    assert!(d.is_subset_of(&dpp).unwrap());
    assert_eq!(asbr_conclude(&d, &d, &b, &p, &g, &j, 3).unwrap().values(), &[1.0]);
    assert_eq!(asbr_conclude(&dpp, &d, &b, &p, &g, &j, 3).unwrap().values(), &[0.5]);
}

#[test]
fn similarity_schemes_gmp3() {
    let crisp = [DNormal, CrispD];
    passes(Method::Asbr1, Some("product"), "goguen", Rule::Gmp3, &crisp);
    passes(Method::Asbr2, Some("min"), "kleene_dienes", Rule::Gmp3, &crisp);
    // neutral element 0, D normal
    passes(Method::Asbr3, Some("max"), "goguen", Rule::Gmp3, &[DNormal]);
    passes(Method::Asbr3, Some("probabilistic_sum"), "goguen", Rule::Gmp3, &[DNormal]);
    fails(Method::Asbr4, Some("projection_second"), "goguen", Rule::Gmp3, &crisp);
}

#[test]
fn similarity_schemes_gmp4() {
    passes(Method::Asbr1, Some("product"), "goguen", Rule::Gmp4, &[]);
    passes(Method::Asbr2, Some("min"), "kleene_dienes", Rule::Gmp4, &[]);
    passes(Method::Asbr3, Some("product"), "rescher_gaines", Rule::Gmp4, &[]);
    passes(Method::Asbr4, Some("product"), "goguen", Rule::Gmp4, &[]);
}

#[test]
fn aqip_rules() {
    let grid = Grid::new(101).unwrap();
    let godel = Implication::godel();
    let a = induced_aggregation(&godel).unwrap();
    for &x in grid.points() {
        for &y in grid.points() {
            assert_eq!(a.eval(x, godel.eval(x, y)), x.min(y), "({x}, {y})");
        }
    }
    passes(Method::Aqip, None, "godel", Rule::Gmp2, &[]);
    fails(Method::Aqip, None, "fodor", Rule::Gmp2, &[]);
    for i in ["goguen", "godel", "lukasiewicz"] {
        passes(Method::Aqip, None, i, Rule::Gmp4, &[]);
        fails(Method::Aqip, None, i, Rule::Gmp3, &[DcomplementNormal]);
    }
    fails(Method::Aqip, None, "godel", Rule::Gmp1, &[DprimeNormal]);
}

#[test]
fn qip_minimality_on_small_grids() {
    let u = Universe::numbered("U", "x", 2).unwrap();
    let v = Universe::numbered("V", "y", 2).unwrap();
    let levels = [0.0, 0.25, 0.5, 0.75, 1.0];
    let grid = Grid::new(21).unwrap();
    let g = Implication::goguen();
    for code in 0..5usize.pow(6) {
        let digit = |k: u32| levels[(code / 5usize.pow(k)) % 5];
        let d = DiscreteFuzzySet::new(&u, vec![digit(0), digit(1)]).unwrap();
        let b = DiscreteFuzzySet::new(&v, vec![digit(2), digit(3)]).unwrap();
        let bp = DiscreteFuzzySet::new(&v, vec![digit(4), digit(5)]).unwrap();
        let dp = aqip_fmt(&bp, &d, &b, &g).unwrap().conclusion;
        assert!(verify_qip_fmt_optimality(&bp, &d, &b, &dp, &g, &grid).unwrap().holds(), "D = {d}, B = {b}, B' = {bp}");
    }
    // a candidate above the solution is not minimal
    let d = DiscreteFuzzySet::new(&u, vec![1.0, 0.5]).unwrap();
    let b = DiscreteFuzzySet::new(&v, vec![0.25, 1.0]).unwrap();
    let sol = aqip_fmp(&d, &d, &b, &g).unwrap().conclusion;
    let lifted = DiscreteFuzzySet::new(&v, sol.values().iter().map(|&x| (x + 0.3).min(1.0)).collect()).unwrap();
    assert!(!verify_qip_optimality(&d, &d, &b, &lifted, &g, &grid).unwrap().minimal.holds);
}

#[test]
fn roundtrip_for_right_continuous_builtins() {
    let grid = Grid::new(41).unwrap();
    for b in BuiltinImplication::ALL {
        let i = Implication::from_builtin(b);
        if !i.is_right_continuous() || induced_aggregation(&i).is_err() {
            continue;
        }
        let r = roundtrip_check(&i, &grid).unwrap();
        assert!(r.max_gap <= 1e-6, "{}: {r:?}", i.name());
    }
}

#[test]
fn declared_attributes_survive_the_grid() {
    let grid = Grid::new(101).unwrap();
    for name in BuiltinAggregation::NAMES {
        let a = aggreason::connectives::builtin_aggregation(name, if name == "clayton_copula" { &[2.0] } else { &[] }).unwrap();
        let r = classify(&a, &grid);
        assert!(r.contradictions(a.attrs()).is_empty(), "{name}: {:?}", r.contradictions(a.attrs()));
    }
    for b in BuiltinImplication::ALL {
        let i = Implication::from_builtin(b);
        let r = check_implication_properties(&i, None, &grid);
        assert!(r.is_implication(), "{}", i.name());
        assert!(r.contradictions(i.attrs()).is_empty(), "{}: {:?}", i.name(), r.contradictions(i.attrs()));
    }
}

#[test]
fn default_report_is_reproducible_and_backed() {
    let configs = default_configs(&Sampling::default());
    let a = serde_json::to_string(&verdict_report(&configs).unwrap()).unwrap();
    let report = verdict_report(&configs).unwrap();
    assert_eq!(a, serde_json::to_string(&report).unwrap());
    for row in &report.rows {
        for (rule, cell) in &row.cells {
            let cfg = &report.configs[cell.config];
            match cell.result.verdict {
                Verdict::Pass => assert!(cell.result.checked >= 500, "{} {rule}", row.label),
                Verdict::Fail => {
                    let ce = cell.result.counterexample.as_ref().unwrap();
                    let replayed = match &ce.source {
                        Source::Trial { trial, .. } => sample_instance(cfg, *rule, *trial).unwrap(),
                        Source::Seeded { name } => cfg.seeds.iter().find(|s| &s.name == name).unwrap().instance.clone(),
                    };
                    if matches!(ce.source, Source::Trial { .. }) {
                        assert_eq!(replayed, ce.instance);
                    } else {
                        assert_eq!(replayed.d, ce.instance.d);
                    }
                }
                Verdict::NotApplicable => panic!("{} {rule} not applicable", row.label),
            }
        }
    }
}
