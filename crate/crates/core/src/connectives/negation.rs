use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::Grid;

type UnaryFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A fuzzy negation: `N(0) = 1`, `N(1) = 0`, nonincreasing.
#[derive(Clone)]
pub struct Negation {
    name: String,
    func: UnaryFn,
    declared_strict: bool,
    declared_strong: bool,
}

impl fmt::Debug for Negation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Negation")
            .field("name", &self.name)
            .field("declared_strict", &self.declared_strict)
            .field("declared_strong", &self.declared_strong)
            .finish()
    }
}

impl Negation {
    /// `N(x) = 1 - x`.
    pub fn standard() -> Self {
        Negation {
            name: "standard".into(),
            func: Arc::new(|x| 1.0 - x),
            declared_strict: true,
            declared_strong: true,
        }
    }

    /// Builds a negation from a closure, checking (N1), (N2) and, when
    /// declared strong, involutivity on a 101-point grid.
    pub fn custom<F>(name: impl Into<String>, f: F, declared_strict: bool, declared_strong: bool) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let name = name.into();
        let invalid = |reason: String| Error::InvalidParameters { name: name.clone(), reason };
        if f(0.0) != 1.0 || f(1.0) != 0.0 {
            return Err(invalid("boundary conditions N(0)=1, N(1)=0 fail".into()));
        }
        let grid = Grid::new(101)?;
        let values: Vec<f64> = grid.points().iter().map(|&x| f(x)).collect();
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(invalid(format!("value {v} leaves [0, 1]")));
        }
        for (k, w) in values.windows(2).enumerate() {
            if w[1] > w[0] {
                return Err(invalid(format!("increases at x = {}", grid.points()[k])));
            }
            if declared_strict && w[1] == w[0] {
                return Err(invalid(format!("not strictly decreasing at x = {}", grid.points()[k])));
            }
        }
        if declared_strong {
            for &x in grid.points() {
                if (f(f(x)) - x).abs() > 1e-9 {
                    return Err(invalid(format!("N(N({x})) != {x}")));
                }
            }
        }
        Ok(Negation { name, func: Arc::new(f), declared_strict, declared_strong })
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "standard" => Ok(Negation::standard()),
            _ => Err(Error::UnknownName { kind: "negation", name: name.into() }),
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.func)(x)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_strict(&self) -> bool {
        self.declared_strict
    }

    pub fn is_strong(&self) -> bool {
        self.declared_strong
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_is_involutive() {
        let n = Negation::standard();
        for k in 0..=100 {
            let x = k as f64 / 100.0;
            assert!((n.eval(n.eval(x)) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn custom_rejects_bad_boundary() {
        assert!(Negation::custom("bad", |x| 0.5 * (1.0 - x), false, false).is_err());
    }

    #[test]
    fn custom_accepts_sugeno_type() {
        // N(x) = (1 - x) / (1 + x) is strong
        let n = Negation::custom("sugeno1", |x| (1.0 - x) / (1.0 + x), true, true).unwrap();
        assert!((n.eval(0.5) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn custom_rejects_false_strong_claim() {
        assert!(Negation::custom("sq", |x| 1.0 - x * x, true, true).is_err());
        assert!(Negation::custom("sq", |x| 1.0 - x * x, true, false).is_ok());
    }
}
