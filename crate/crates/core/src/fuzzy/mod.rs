//! Discrete fuzzy sets over named finite universes.

mod similarity;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::connectives::Negation;
use crate::error::{Error, Result};

pub use similarity::{
    check_s4_exhaustive, check_similarity_axioms, jaccard, jaccard_similarity, SimilarityMeasure, SimilarityReport,
};

/// A finite universe with ordered, distinct labels.
#[derive(Debug, Clone)]
pub struct Universe {
    name: String,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.labels == other.labels
    }
}

impl Universe {
    pub fn new<S: Into<String>>(name: impl Into<String>, labels: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let name = name.into();
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidUniverse { name, reason: "no labels".into() });
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (k, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), k).is_some() {
                return Err(Error::InvalidUniverse { name, reason: format!("duplicate label `{l}`") });
            }
        }
        Ok(Arc::new(Universe { name, labels, index }))
    }

    /// Labels `prefix1, prefix2, …, prefixN`.
    pub fn numbered(name: impl Into<String>, prefix: &str, n: usize) -> Result<Arc<Self>> {
        Universe::new(name, (1..=n).map(|k| format!("{prefix}{k}")))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLabel { universe: self.name.clone(), label: label.into() })
    }
}

/// Membership values stored densely in universe order.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFuzzySet {
    universe: Arc<Universe>,
    values: Vec<f64>,
}

fn check_range(values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        Some(&value) => Err(Error::OutOfRange { value }),
        None => Ok(()),
    }
}

impl DiscreteFuzzySet {
    pub fn new(universe: &Arc<Universe>, values: Vec<f64>) -> Result<Self> {
        if values.len() != universe.len() {
            return Err(Error::DimensionMismatch(format!(
                "universe `{}` has {} labels but {} values were given",
                universe.name(),
                universe.len(),
                values.len()
            )));
        }
        check_range(&values)?;
        Ok(DiscreteFuzzySet { universe: universe.clone(), values })
    }

    /// Sparse construction; absent labels get membership 0.
    pub fn from_pairs<'a>(universe: &Arc<Universe>, pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self> {
        let mut values = vec![0.0; universe.len()];
        for (label, v) in pairs {
            check_range(&[v])?;
            values[universe.position(label)?] = v;
        }
        Ok(DiscreteFuzzySet { universe: universe.clone(), values })
    }

    pub fn constant(universe: &Arc<Universe>, value: f64) -> Result<Self> {
        DiscreteFuzzySet::new(universe, vec![value; universe.len()])
    }

    pub fn empty(universe: &Arc<Universe>) -> Self {
        DiscreteFuzzySet { universe: universe.clone(), values: vec![0.0; universe.len()] }
    }

    pub fn universal(universe: &Arc<Universe>) -> Self {
        DiscreteFuzzySet { universe: universe.clone(), values: vec![1.0; universe.len()] }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, label: &str) -> Result<f64> {
        Ok(self.values[self.universe.position(label)?])
    }

    /// Nonzero memberships keyed by label.
    pub fn to_sparse(&self) -> BTreeMap<String, f64> {
        self.universe
            .labels()
            .iter()
            .zip(&self.values)
            .filter(|(_, &v)| v != 0.0)
            .map(|(l, &v)| (l.clone(), v))
            .collect()
    }

    pub fn same_universe(&self, other: &DiscreteFuzzySet) -> Result<()> {
        ensure_universe(&self.universe, &other.universe)
    }

    /// Pointwise `N` over every label, including those with membership 0.
    pub fn complement(&self, n: &Negation) -> Self {
        DiscreteFuzzySet { universe: self.universe.clone(), values: self.values.iter().map(|&v| n.eval(v)).collect() }
    }

    pub fn is_normal(&self) -> bool {
        self.values.contains(&1.0)
    }

    pub fn is_crisp(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    /// `self ⊆ other` pointwise.
    pub fn is_subset_of(&self, other: &DiscreteFuzzySet) -> Result<bool> {
        self.same_universe(other)?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    pub fn approx_eq(&self, other: &DiscreteFuzzySet, tol: f64) -> Result<bool> {
        self.same_universe(other)?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| (a - b).abs() <= tol))
    }

    pub fn spec(&self) -> FuzzySetSpec {
        FuzzySetSpec { universe: self.universe.name().into(), membership: self.to_sparse() }
    }
}

pub(crate) fn ensure_universe(expected: &Arc<Universe>, found: &Arc<Universe>) -> Result<()> {
    if Arc::ptr_eq(expected, found) || expected == found {
        Ok(())
    } else {
        Err(Error::UniverseMismatch { expected: expected.name().into(), found: found.name().into() })
    }
}

/// Singleton-sum notation, e.g. `1/x1 + 0.2/x2`; the empty set prints as `0`.
impl fmt::Display for DiscreteFuzzySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .universe
            .labels()
            .iter()
            .zip(&self.values)
            .filter(|(_, &v)| v != 0.0)
            .map(|(l, v)| format!("{v}/{l}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Serialized form: `{"universe": "U", "membership": {"x1": 1.0}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzySetSpec {
    pub universe: String,
    #[serde(default)]
    pub membership: BTreeMap<String, f64>,
}

impl FuzzySetSpec {
    pub fn resolve(&self, universe: &Arc<Universe>) -> Result<DiscreteFuzzySet> {
        if universe.name() != self.universe {
            return Err(Error::UniverseMismatch { expected: self.universe.clone(), found: universe.name().into() });
        }
        DiscreteFuzzySet::from_pairs(universe, self.membership.iter().map(|(l, &v)| (l.as_str(), v)))
    }
}

/// Whether memberships sum to 1 (within 1e-9) at every label.
pub fn ruspini_partition_check(sets: &[DiscreteFuzzySet]) -> Result<bool> {
    let Some(first) = sets.first() else {
        return Ok(false);
    };
    for s in sets {
        first.same_universe(s)?;
    }
    Ok((0..first.values.len()).all(|k| (sets.iter().map(|s| s.values[k]).sum::<f64>() - 1.0).abs() <= 1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u5() -> Arc<Universe> {
        Universe::numbered("U", "x", 5).unwrap()
    }

    #[test]
    fn complement_of_example_set() {
        let u = u5();
        let d = DiscreteFuzzySet::from_pairs(&u, [("x1", 1.0), ("x2", 0.2), ("x3", 0.5)]).unwrap();
        let c = d.complement(&Negation::standard());
        let want = DiscreteFuzzySet::from_pairs(&u, [("x2", 0.8), ("x3", 0.5), ("x4", 1.0), ("x5", 1.0)]).unwrap();
        assert!(c.approx_eq(&want, 1e-15).unwrap());
        assert!(c.complement(&Negation::standard()).approx_eq(&d, 1e-15).unwrap());
        assert_eq!(DiscreteFuzzySet::empty(&u).complement(&Negation::standard()), DiscreteFuzzySet::universal(&u));
    }

    #[test]
    fn normality() {
        let u = u5();
        assert!(DiscreteFuzzySet::from_pairs(&u, [("x1", 1.0), ("x2", 0.2)]).unwrap().is_normal());
        assert!(!DiscreteFuzzySet::from_pairs(&u, [("x1", 0.9)]).unwrap().is_normal());
        assert!(DiscreteFuzzySet::universal(&u).is_normal());
    }

    #[test]
    fn construction_errors() {
        let u = u5();
        assert!(matches!(DiscreteFuzzySet::from_pairs(&u, [("x9", 0.5)]), Err(Error::UnknownLabel { .. })));
        assert!(matches!(DiscreteFuzzySet::from_pairs(&u, [("x1", 1.2)]), Err(Error::OutOfRange { .. })));
        assert!(Universe::new("bad", ["a", "a"]).is_err());
        assert!(Universe::new("bad", Vec::<String>::new()).is_err());
        let v = Universe::numbered("V", "y", 5).unwrap();
        let a = DiscreteFuzzySet::empty(&u);
        let b = DiscreteFuzzySet::empty(&v);
        assert!(matches!(a.is_subset_of(&b), Err(Error::UniverseMismatch { .. })));
    }

    #[test]
    fn display_and_sparse() {
        let u = u5();
        let d = DiscreteFuzzySet::from_pairs(&u, [("x3", 0.5), ("x1", 1.0)]).unwrap();
        assert_eq!(d.to_string(), "1/x1 + 0.5/x3");
        assert_eq!(d.spec().resolve(&u).unwrap(), d);
        assert_eq!(DiscreteFuzzySet::empty(&u).to_string(), "0");
    }

    #[test]
    fn ruspini() {
        let u = Universe::numbered("U", "x", 3).unwrap();
        let s = |v: Vec<f64>| DiscreteFuzzySet::new(&u, v).unwrap();
        assert!(ruspini_partition_check(&[s(vec![0.3, 0.3, 0.3]), s(vec![0.7, 0.7, 0.7])]).unwrap());
        assert!(ruspini_partition_check(&[s(vec![1., 0., 0.]), s(vec![0., 1., 0.]), s(vec![0., 0., 1.])]).unwrap());
        assert!(!ruspini_partition_check(&[s(vec![1., 0.5, 0.]), s(vec![1., 0.5, 0.])]).unwrap());
    }
}
