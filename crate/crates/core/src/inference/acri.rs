use std::sync::Arc;

use super::relation::{sup_a_compose, FuzzyRelation};
use crate::connectives::Aggregation;
use crate::error::{Error, Result};
use crate::fuzzy::{ensure_universe, DiscreteFuzzySet, Universe};
use crate::implications::Implication;

/// `max_x A(p(x), I(d(x), b(y)))` for every `y`.
fn sup_compose(p: &[f64], d: &[f64], b: &[f64], a: &Aggregation, arrow: &dyn Fn(f64, f64) -> f64) -> Vec<f64> {
    b.iter()
        .map(|&by| p.iter().zip(d).map(|(&px, &dx)| a.eval(px, arrow(dx, by))).fold(0.0, f64::max))
        .collect()
}

/// Conclusion of the single-rule FMP: `B'(y) = max_x A(D'(x), I(D(x), B(y)))`.
pub fn acri_fmp(
    dprime: &DiscreteFuzzySet,
    d: &DiscreteFuzzySet,
    b: &DiscreteFuzzySet,
    a: &Aggregation,
    i: &Implication,
) -> Result<DiscreteFuzzySet> {
    d.same_universe(dprime)?;
    let out = sup_compose(dprime.values(), d.values(), b.values(), a, &|x, y| i.eval(x, y));
    DiscreteFuzzySet::new(b.universe(), out)
}

/// Conclusion of the single-rule FMT: `D'(x) = max_y A(B'(y), I(D(x), B(y)))`.
pub fn acri_fmt(
    bprime: &DiscreteFuzzySet,
    d: &DiscreteFuzzySet,
    b: &DiscreteFuzzySet,
    a: &Aggregation,
    i: &Implication,
) -> Result<DiscreteFuzzySet> {
    b.same_universe(bprime)?;
    // swap roles: iterate over y for every x
    let out = sup_compose(bprime.values(), b.values(), d.values(), a, &|by, dx| i.eval(dx, by));
    DiscreteFuzzySet::new(d.universe(), out)
}

/// How a rule `D_j → B_j` is turned into a relation.
#[derive(Debug, Clone)]
pub enum Arrow {
    Implication(Implication),
    /// Conjunctive (Mamdani-style) reading, usually a t-norm.
    Aggregation(Aggregation),
}

impl Arrow {
    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Arrow::Implication(i) => i.eval(x, y),
            Arrow::Aggregation(a) => a.eval(x, y),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Arrow::Implication(i) => i.name(),
            Arrow::Aggregation(a) => a.name(),
        }
    }
}

/// `IF x1 is D^1 AND … AND xm is D^m THEN y is B`.
#[derive(Debug, Clone, PartialEq)]
pub struct MisoRule {
    pub antecedents: Vec<DiscreteFuzzySet>,
    pub consequent: DiscreteFuzzySet,
}

impl MisoRule {
    pub fn new(antecedents: Vec<DiscreteFuzzySet>, consequent: DiscreteFuzzySet) -> Self {
        MisoRule { antecedents, consequent }
    }
}

/// Rules over shared input universes and one output universe. Antecedent
/// memberships are joined by folding `and_combiner` over the inputs.
#[derive(Debug, Clone)]
pub struct RuleBase {
    inputs: Vec<Arc<Universe>>,
    output: Arc<Universe>,
    domain: Arc<Universe>,
    rules: Vec<MisoRule>,
    joint: Vec<Vec<f64>>,
    and_combiner: Aggregation,
}

/// Visits the product of `sizes` with the last coordinate varying fastest.
fn product_indices(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out.into_iter().flat_map(|p| (0..n).map(move |k| [p.as_slice(), &[k]].concat())).collect();
    }
    out
}

fn join(sets: &[&[f64]], and: &Aggregation, sizes: &[usize]) -> Vec<f64> {
    product_indices(sizes)
        .into_iter()
        .map(|idx| {
            let vals: Vec<f64> = idx.iter().zip(sets).map(|(&k, s)| s[k]).collect();
            and.fold(&vals).expect("arity >= 1")
        })
        .collect()
}

impl RuleBase {
    pub fn new(rules: Vec<MisoRule>, and_combiner: Aggregation) -> Result<Self> {
        let first = rules
            .first()
            .ok_or_else(|| Error::InvalidParameters { name: "rule_base".into(), reason: "no rules".into() })?;
        let arity = first.antecedents.len();
        if arity == 0 {
            return Err(Error::InvalidParameters { name: "rule_base".into(), reason: "arity must be at least 1".into() });
        }
        let inputs: Vec<Arc<Universe>> = first.antecedents.iter().map(|d| d.universe().clone()).collect();
        let output = first.consequent.universe().clone();
        for r in &rules {
            if r.antecedents.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: r.antecedents.len() });
            }
            for (d, u) in r.antecedents.iter().zip(&inputs) {
                ensure_universe(u, d.universe())?;
            }
            ensure_universe(&output, r.consequent.universe())?;
        }
        let domain = if arity == 1 {
            inputs[0].clone()
        } else {
            let name = inputs.iter().map(|u| u.name()).collect::<Vec<_>>().join("x");
            let sizes: Vec<usize> = inputs.iter().map(|u| u.len()).collect();
            let labels = product_indices(&sizes).into_iter().map(|idx| {
                idx.iter().zip(&inputs).map(|(&k, u)| u.labels()[k].as_str()).collect::<Vec<_>>().join(",")
            });
            Universe::new(name, labels)?
        };
        let sizes: Vec<usize> = inputs.iter().map(|u| u.len()).collect();
        let joint = rules
            .iter()
            .map(|r| {
                let sets: Vec<&[f64]> = r.antecedents.iter().map(|d| d.values()).collect();
                join(&sets, &and_combiner, &sizes)
            })
            .collect();
        Ok(RuleBase { inputs, output, domain, rules, joint, and_combiner })
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    pub fn rules(&self) -> &[MisoRule] {
        &self.rules
    }

    pub fn output(&self) -> &Arc<Universe> {
        &self.output
    }

    /// The product of the input universes (the input universe itself when
    /// the arity is 1). Labels of product points are comma-joined.
    pub fn domain(&self) -> &Arc<Universe> {
        &self.domain
    }

    pub fn and_combiner(&self) -> &Aggregation {
        &self.and_combiner
    }

    /// Joint antecedent `D_j` of rule `j` on [`RuleBase::domain`].
    pub fn antecedent(&self, j: usize) -> DiscreteFuzzySet {
        DiscreteFuzzySet::new(&self.domain, self.joint[j].clone()).expect("folded from valid memberships")
    }

    /// Joins a tuple of input sets the same way antecedents are joined.
    pub fn joint_input(&self, inputs: &[DiscreteFuzzySet]) -> Result<DiscreteFuzzySet> {
        if inputs.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: inputs.len() });
        }
        for (d, u) in inputs.iter().zip(&self.inputs) {
            ensure_universe(u, d.universe())?;
        }
        let sets: Vec<&[f64]> = inputs.iter().map(|d| d.values()).collect();
        let sizes: Vec<usize> = self.inputs.iter().map(|u| u.len()).collect();
        DiscreteFuzzySet::new(&self.domain, join(&sets, &self.and_combiner, &sizes))
    }

    /// The rule relations `D_j → B_j` combined pointwise by `combiner`.
    pub fn aggregated_relation(&self, arrow: &Arrow, combiner: &Aggregation) -> Result<FuzzyRelation> {
        let bs: Vec<&[f64]> = self.rules.iter().map(|r| r.consequent.values()).collect();
        let mut buf = Vec::with_capacity(self.rules.len());
        FuzzyRelation::from_fn(&self.domain, &self.output, |x, y| {
            buf.clear();
            buf.extend(self.joint.iter().zip(&bs).map(|(d, b)| arrow.eval(d[x], b[y])));
            combiner.fold(&buf).expect("at least one rule")
        })
    }
}

/// First infer with every rule, then combine the conclusions pointwise.
pub fn fita(
    inputs: &[DiscreteFuzzySet],
    rb: &RuleBase,
    a: &Aggregation,
    arrow: &Arrow,
    combiner: &Aggregation,
) -> Result<DiscreteFuzzySet> {
    let p = rb.joint_input(inputs)?;
    let per_rule: Vec<Vec<f64>> = rb
        .joint
        .iter()
        .zip(&rb.rules)
        .map(|(d, r)| sup_compose(p.values(), d, r.consequent.values(), a, &|x, y| arrow.eval(x, y)))
        .collect();
    let out = (0..rb.output.len())
        .map(|y| {
            let col: Vec<f64> = per_rule.iter().map(|b| b[y]).collect();
            combiner.fold(&col).expect("at least one rule")
        })
        .collect();
    DiscreteFuzzySet::new(&rb.output, out)
}

/// First combine the rule relations, then compose once.
pub fn fati(
    inputs: &[DiscreteFuzzySet],
    rb: &RuleBase,
    a: &Aggregation,
    arrow: &Arrow,
    combiner: &Aggregation,
) -> Result<DiscreteFuzzySet> {
    let p = rb.joint_input(inputs)?;
    let r = rb.aggregated_relation(arrow, combiner)?;
    Ok(sup_a_compose(&FuzzyRelation::row(&p), &r, a)?.row_set(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectives::Negation;

    fn example() -> (Arc<Universe>, Arc<Universe>, DiscreteFuzzySet, DiscreteFuzzySet) {
        let u = Universe::numbered("U", "x", 5).unwrap();
        let v = Universe::numbered("V", "y", 5).unwrap();
        let d = DiscreteFuzzySet::from_pairs(&u, [("x1", 1.0), ("x2", 0.2), ("x3", 0.5)]).unwrap();
        let b = DiscreteFuzzySet::from_pairs(&v, [("y4", 0.5), ("y5", 1.0)]).unwrap();
        (u, v, d, b)
    }

    #[test]
    fn fmp_examples() {
        let (u, _, d, b) = example();
        let (p, g) = (Aggregation::product(), Implication::goguen());
        assert!(acri_fmp(&d, &d, &b, &p, &g).unwrap().approx_eq(&b, 1e-12).unwrap());
        let dc = d.complement(&Negation::standard());
        assert!(acri_fmp(&dc, &d, &b, &p, &g).unwrap().values().iter().all(|&v| v == 1.0));
        let zero = DiscreteFuzzySet::empty(&u);
        assert!(acri_fmp(&zero, &d, &b, &p, &g).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fmt_examples() {
        let (_, v, d, b) = example();
        let (p, g) = (Aggregation::product(), Implication::goguen());
        assert!(d.is_subset_of(&acri_fmt(&b, &d, &b, &p, &g).unwrap()).unwrap());
        let zero = DiscreteFuzzySet::empty(&v);
        assert!(acri_fmt(&zero, &d, &b, &p, &g).unwrap().values().iter().all(|&x| x == 0.0));
        // B' = B^C gives 1 only off the support of D; at x1 the best y is y4
        // with (1 - 0.5) * I(1, 0.5) = 0.25.
        let bc = b.complement(&Negation::standard());
        let out = acri_fmt(&bc, &d, &b, &p, &g).unwrap();
        for (dx, ox) in d.values().iter().zip(out.values()) {
            if *dx == 0.0 {
                assert_eq!(*ox, 1.0);
            }
        }
        assert!((out.get("x1").unwrap() - 0.25).abs() < 1e-15);
        assert!((out.get("x2").unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn universe_checks() {
        let (_, _, d, b) = example();
        let err = acri_fmp(&b, &d, &b, &Aggregation::product(), &Implication::goguen());
        assert!(matches!(err, Err(Error::UniverseMismatch { .. })));
    }

    #[test]
    fn single_rule_schemes_agree() {
        let (u, _, d, b) = example();
        let dp = DiscreteFuzzySet::from_pairs(&u, [("x2", 0.5), ("x3", 1.0), ("x4", 0.2)]).unwrap();
        let rb = RuleBase::new(vec![MisoRule::new(vec![d.clone()], b.clone())], Aggregation::min()).unwrap();
        let (p, g) = (Aggregation::product(), Implication::goguen());
        let arrow = Arrow::Implication(g.clone());
        let direct = acri_fmp(&dp, &d, &b, &p, &g).unwrap();
        let a = fita(std::slice::from_ref(&dp), &rb, &p, &arrow, &Aggregation::max()).unwrap();
        let f = fati(std::slice::from_ref(&dp), &rb, &p, &arrow, &Aggregation::max()).unwrap();
        assert!(a.approx_eq(&direct, 1e-15).unwrap());
        assert!(f.approx_eq(&direct, 1e-15).unwrap());
        assert!(matches!(fita(&[dp.clone(), dp], &rb, &p, &arrow, &Aggregation::max()), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn two_input_joint_membership() {
        let u1 = Universe::numbered("A", "a", 2).unwrap();
        let u2 = Universe::numbered("B", "b", 3).unwrap();
        let v = Universe::numbered("V", "y", 2).unwrap();
        let d1 = DiscreteFuzzySet::new(&u1, vec![1.0, 0.5]).unwrap();
        let d2 = DiscreteFuzzySet::new(&u2, vec![0.2, 1.0, 0.4]).unwrap();
        let b = DiscreteFuzzySet::new(&v, vec![0.3, 1.0]).unwrap();
        let rb = RuleBase::new(vec![MisoRule::new(vec![d1, d2], b)], Aggregation::min()).unwrap();
        assert_eq!(rb.domain().len(), 6);
        assert_eq!(rb.domain().labels()[4], "a2,b2");
        assert_eq!(rb.antecedent(0).values(), &[0.2, 1.0, 0.4, 0.2, 0.5, 0.4]);
    }
}
