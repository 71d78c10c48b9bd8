use super::relation::FuzzyRelation;
use crate::connectives::Aggregation;
use crate::error::{Error, Result};
use crate::fuzzy::{DiscreteFuzzySet, SimilarityMeasure};
use crate::implications::Implication;
use crate::numerics::UnitValue;
use crate::validity::{check_rule, HypothesisConfig, Method, Requirement, Rule, RuleVerdict, Sampling};

/// `R_1(x, y) = A(s, R(x, y))`.
pub fn modified_relation_r1(s: UnitValue, r: &FuzzyRelation, a: &Aggregation) -> Result<FuzzyRelation> {
    r.map(|v| a.eval(s.get(), v))
}

/// `R_2(x, y) = I(s, R(x, y))`.
pub fn modified_relation_r2(s: UnitValue, r: &FuzzyRelation, i: &Implication) -> Result<FuzzyRelation> {
    r.map(|v| i.eval(s.get(), v))
}

/// Conclusion `B'_k` of the similarity-based scheme `k`, with `s = S(D, D')`:
///
/// | k | formula |
/// |---|---------|
/// | 1 | `max_x I(s, A(D(x), B(y)))` |
/// | 2 | `min_x I(s, I(D(x), B(y)))` |
/// | 3 | `max_x A(s, A(D(x), B(y)))` |
/// | 4 | `min_x A(s, I(D(x), B(y)))` |
pub fn asbr_conclude(
    dprime: &DiscreteFuzzySet,
    d: &DiscreteFuzzySet,
    b: &DiscreteFuzzySet,
    a: &Aggregation,
    i: &Implication,
    sim: &SimilarityMeasure,
    scheme: u8,
) -> Result<DiscreteFuzzySet> {
    let s = sim.measure(d, dprime)?;
    asbr_with_similarity(s, d, b, a, i, scheme)
}

/// [`asbr_conclude`] with the similarity value already computed.
pub fn asbr_with_similarity(
    s: f64,
    d: &DiscreteFuzzySet,
    b: &DiscreteFuzzySet,
    a: &Aggregation,
    i: &Implication,
    scheme: u8,
) -> Result<DiscreteFuzzySet> {
    if !(1..=4).contains(&scheme) {
        return Err(Error::BadScheme(scheme));
    }
    let inner = |dx: f64, by: f64| match scheme {
        1 => i.eval(s, a.eval(dx, by)),
        2 => i.eval(s, i.eval(dx, by)),
        3 => a.eval(s, a.eval(dx, by)),
        _ => a.eval(s, i.eval(dx, by)),
    };
    let sup = scheme % 2 == 1;
    let out = b
        .values()
        .iter()
        .map(|&by| {
            let vals = d.values().iter().map(|&dx| inner(dx, by));
            if sup {
                vals.fold(0.0, f64::max)
            } else {
                vals.fold(1.0, f64::min)
            }
        })
        .collect();
    DiscreteFuzzySet::new(b.universe(), out)
}

/// Samples GMP2' for scheme `scheme` with the named connectives, `D` normal.
pub fn check_gmp2_prime(
    aggregation: &str,
    implication: &str,
    scheme: u8,
    sampling: &Sampling,
) -> Result<RuleVerdict> {
    let method = match scheme {
        1 => Method::Asbr1,
        2 => Method::Asbr2,
        3 => Method::Asbr3,
        4 => Method::Asbr4,
        s => return Err(Error::BadScheme(s)),
    };
    let mut cfg = HypothesisConfig::new(method, &[Rule::Gmp2Prime]).require(&[Requirement::DNormal]);
    cfg.aggregation = Some(aggregation.parse()?);
    cfg.implication = Some(implication.parse()?);
    cfg.sampling = sampling.clone();
    check_rule(&cfg, Rule::Gmp2Prime)
}
