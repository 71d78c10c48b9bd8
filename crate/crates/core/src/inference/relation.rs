use std::sync::Arc;

use crate::connectives::Aggregation;
use crate::error::{Error, Result};
use crate::fuzzy::{ensure_universe, DiscreteFuzzySet, Universe};

/// A fuzzy relation between two finite universes, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRelation {
    rows: Arc<Universe>,
    cols: Arc<Universe>,
    values: Vec<f64>,
}

impl FuzzyRelation {
    pub fn new(rows: &Arc<Universe>, cols: &Arc<Universe>, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows.len() * cols.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} relation needs {} values, got {}",
                rows.len(),
                cols.len(),
                rows.len() * cols.len(),
                values.len()
            )));
        }
        if let Some(&value) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OutOfRange { value });
        }
        Ok(FuzzyRelation { rows: rows.clone(), cols: cols.clone(), values })
    }

    pub fn from_fn<F>(rows: &Arc<Universe>, cols: &Arc<Universe>, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> f64,
    {
        let mut values = Vec::with_capacity(rows.len() * cols.len());
        for i in 0..rows.len() {
            for j in 0..cols.len() {
                values.push(f(i, j));
            }
        }
        FuzzyRelation::new(rows, cols, values)
    }

    /// `R(x, y) = arrow(D(x), B(y))`.
    pub fn from_sets<F>(d: &DiscreteFuzzySet, b: &DiscreteFuzzySet, arrow: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64,
    {
        let (dv, bv) = (d.values(), b.values());
        FuzzyRelation::from_fn(d.universe(), b.universe(), |i, j| arrow(dv[i], bv[j]))
    }

    /// `D` as a one-row relation; the row universe has the single label `*`.
    pub fn row(d: &DiscreteFuzzySet) -> Self {
        let rows = Universe::new("*", ["*"]).expect("static universe");
        FuzzyRelation { rows, cols: d.universe().clone(), values: d.values().to_vec() }
    }

    pub fn rows(&self) -> &Arc<Universe> {
        &self.rows
    }

    pub fn cols(&self) -> &Arc<Universe> {
        &self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols.len() + j]
    }

    /// Row `i` as a fuzzy set on the column universe.
    pub fn row_set(&self, i: usize) -> DiscreteFuzzySet {
        let n = self.cols.len();
        DiscreteFuzzySet::new(&self.cols, self.values[i * n..(i + 1) * n].to_vec()).expect("validated on construction")
    }

    /// Applies `f` to every entry.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        FuzzyRelation::new(&self.rows, &self.cols, self.values.iter().map(|&v| f(v)).collect())
    }
}

/// `(S ∘_A R)(x, z) = max_y A(S(x, y), R(y, z))`.
pub fn sup_a_compose(s: &FuzzyRelation, r: &FuzzyRelation, a: &Aggregation) -> Result<FuzzyRelation> {
    ensure_universe(&s.cols, &r.rows).map_err(|_| {
        Error::DimensionMismatch(format!("columns `{}` do not match rows `{}`", s.cols.name(), r.rows.name()))
    })?;
    let mid = s.cols.len();
    FuzzyRelation::from_fn(&s.rows, &r.cols, |x, z| {
        (0..mid).map(|y| a.eval(s.get(x, y), r.get(y, z))).fold(0.0, f64::max)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_examples() {
        let u = Universe::numbered("U", "u", 3).unwrap();
        let id = FuzzyRelation::from_fn(&u, &u, |i, j| if i == j { 1.0 } else { 0.0 }).unwrap();
        let r = FuzzyRelation::new(&u, &u, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]).unwrap();
        assert_eq!(sup_a_compose(&id, &r, &Aggregation::min()).unwrap(), r);

        let one = Universe::new("one", ["p"]).unwrap();
        let s = FuzzyRelation::new(&one, &one, vec![0.5]).unwrap();
        let t = FuzzyRelation::new(&one, &one, vec![0.4]).unwrap();
        assert!((sup_a_compose(&s, &t, &Aggregation::product()).unwrap().get(0, 0) - 0.2).abs() < 1e-15);

        let zero = FuzzyRelation::from_fn(&u, &u, |_, _| 0.0).unwrap();
        assert!(sup_a_compose(&zero, &r, &Aggregation::product()).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn compose_dimension_mismatch() {
        let u = Universe::numbered("U", "u", 2).unwrap();
        let v = Universe::numbered("V", "v", 3).unwrap();
        let s = FuzzyRelation::from_fn(&u, &u, |_, _| 0.5).unwrap();
        let r = FuzzyRelation::from_fn(&v, &u, |_, _| 0.5).unwrap();
        assert!(matches!(sup_a_compose(&s, &r, &Aggregation::min()), Err(Error::DimensionMismatch(_))));
        assert!(FuzzyRelation::new(&u, &v, vec![0.0; 5]).is_err());
    }
}
