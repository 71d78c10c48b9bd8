use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::DiscreteFuzzySet;
use crate::error::{Error, Result};
use crate::numerics::{trial_rng, UnitValue};
use crate::verdict::Check;

type SliceFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;

/// A similarity measure on fuzzy sets over a common universe, evaluated on
/// the dense membership vectors.
#[derive(Clone)]
pub struct SimilarityMeasure {
    name: String,
    func: SliceFn,
}

impl fmt::Debug for SimilarityMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimilarityMeasure").field("name", &self.name).finish()
    }
}

/// `Σ min / Σ max`, with `1` when both sums vanish.
pub fn jaccard(a: &[f64], b: &[f64]) -> f64 {
    let (mut lo, mut hi) = (0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        lo += x.min(y);
        hi += x.max(y);
    }
    if hi == 0.0 {
        1.0
    } else {
        lo / hi
    }
}

pub fn jaccard_similarity(d: &DiscreteFuzzySet, e: &DiscreteFuzzySet) -> Result<UnitValue> {
    d.same_universe(e)?;
    UnitValue::new(jaccard(d.values(), e.values()))
}

impl SimilarityMeasure {
    pub fn jaccard() -> Self {
        SimilarityMeasure { name: "jaccard".into(), func: Arc::new(jaccard) }
    }

    pub fn custom<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        SimilarityMeasure { name: name.into(), func: Arc::new(f) }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "jaccard" => Ok(Self::jaccard()),
            _ => Err(Error::UnknownName { kind: "similarity", name: name.into() }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        (self.func)(a, b)
    }

    pub fn measure(&self, d: &DiscreteFuzzySet, e: &DiscreteFuzzySet) -> Result<f64> {
        d.same_universe(e)?;
        Ok(self.eval(d.values(), e.values()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub measure: String,
    pub trials: usize,
    pub seed: u64,
    pub s1: Check,
    pub s2: Check,
    pub s3: Check,
    pub s4: Check,
}

impl SimilarityReport {
    pub fn holds(&self) -> bool {
        self.checks().iter().all(|c| c.holds)
    }

    pub fn checks(&self) -> [&Check; 4] {
        [&self.s1, &self.s2, &self.s3, &self.s4]
    }
}

const EXACT: f64 = 1e-12;

fn sample_value<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..20) {
        0..=5 => 0.0,
        6..=8 => 1.0,
        9..=13 => rng.gen_range(0..=4) as f64 / 4.0,
        _ => rng.gen::<f64>(),
    }
}

fn sample_set<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| sample_value(rng)).collect()
}

/// Raises every point by a random fraction of its headroom; some points stay put.
fn grow<R: Rng>(rng: &mut R, base: &[f64]) -> Vec<f64> {
    base.iter()
        .map(|&v| match rng.gen_range(0..4) {
            0 => v,
            1 => 1.0,
            _ => (v + rng.gen::<f64>() * (1.0 - v)).min(1.0),
        })
        .collect()
}

fn point(parts: &[&[f64]]) -> Vec<f64> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// Seeded randomized check of the four similarity axioms. Universe sizes
/// vary from 1 to 6; trial `k` draws from stream `k` of `seed`.
///
/// Witness points list the membership vectors one after another.
pub fn check_similarity_axioms(s: &SimilarityMeasure, trials: usize, seed: u64) -> SimilarityReport {
    let (mut s1, mut s2, mut s3, mut s4) = (None, None, None, None);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let n = rng.gen_range(1..=6);
        let d = sample_set(&mut rng, n);
        let e = if rng.gen_bool(0.2) {
            // disjoint support, the case S3 speaks about
            d.iter().map(|&v| if v > 0.0 { 0.0 } else { sample_value(&mut rng) }).collect()
        } else {
            sample_set(&mut rng, n)
        };

        let (de, ed) = (s.eval(&d, &e), s.eval(&e, &d));
        if s1.is_none() && de != ed {
            s1 = Some((point(&[&d, &e]), format!("S(D,D') = {de} but S(D',D) = {ed}")));
        }

        if s2.is_none() {
            let dd = s.eval(&d, &d);
            let gap = d.iter().zip(&e).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if (dd - 1.0).abs() > EXACT {
                s2 = Some((point(&[&d]), format!("S(D,D) = {dd}")));
            } else if de >= 1.0 - EXACT && gap > 1e-9 {
                s2 = Some((point(&[&d, &e]), format!("S(D,D') = {de} although D != D'")));
            }
        }

        if s3.is_none() && de <= EXACT {
            if let Some(k) = (0..n).find(|&k| d[k].min(e[k]) > EXACT) {
                s3 = Some((
                    point(&[&d, &e]),
                    format!("S(D,D') = {de} but min(D,D') = {} at position {k}", d[k].min(e[k])),
                ));
            }
        }

        if s4.is_none() {
            let mid = grow(&mut rng, &d);
            let top = grow(&mut rng, &mid);
            let (a, b, c) = (s.eval(&d, &top), s.eval(&d, &mid), s.eval(&mid, &top));
            if a > b.min(c) + EXACT {
                s4 = Some((point(&[&d, &mid, &top]), format!("S(D,D'') = {a} > min({b}, {c})")));
            }
        }
    }
    SimilarityReport {
        measure: s.name().into(),
        trials,
        seed,
        s1: Check::from_search("S1", s1),
        s2: Check::from_search("S2", s2),
        s3: Check::from_search("S3", s3),
        s4: Check::from_search("S4", s4),
    }
}

/// S4 on every nested triple `D ⊆ D' ⊆ D''` over `points` labels with
/// memberships `k / denominator`.
///
/// Labels are enumerated as a multiset of per-label value triples, so the
/// measure must be invariant under permuting labels (Jaccard is).
pub fn check_s4_exhaustive(s: &SimilarityMeasure, points: usize, denominator: u32) -> Check {
    let levels: Vec<f64> = (0..=denominator).map(|k| k as f64 / denominator as f64).collect();
    let mut triples = Vec::new();
    for (i, &a) in levels.iter().enumerate() {
        for (j, &b) in levels.iter().enumerate().skip(i) {
            for &c in &levels[j..] {
                triples.push([a, b, c]);
            }
        }
    }
    let label = format!("S4 exhaustive ({points} labels, step 1/{denominator})");
    let mut idx = vec![0usize; points];
    let (mut d, mut m, mut t) = (vec![0.0; points], vec![0.0; points], vec![0.0; points]);
    loop {
        for (k, &ix) in idx.iter().enumerate() {
            let [a, b, c] = triples[ix];
            d[k] = a;
            m[k] = b;
            t[k] = c;
        }
        let (x, y, z) = (s.eval(&d, &t), s.eval(&d, &m), s.eval(&m, &t));
        if x > y.min(z) + EXACT {
            return Check::fail(label, point(&[&d, &m, &t]), format!("S(D,D'') = {x} > min({y}, {z})"));
        }
        // next non-decreasing index sequence
        let Some(pos) = (0..points).rev().find(|&k| idx[k] + 1 < triples.len()) else {
            return Check::pass(label);
        };
        let next = idx[pos] + 1;
        for v in &mut idx[pos..] {
            *v = next;
        }
    }
}
