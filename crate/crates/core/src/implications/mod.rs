//! Fuzzy implications: descriptors, family constructors and property checks.

mod constructors;
mod generator;
mod properties;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::connectives::BinaryFn;
use crate::error::{Error, Result};
use crate::numerics::{UnitValue, SNAP};

pub use constructors::{
    an_implication, probabilistic_implication, probabilistic_s_implication, r_implication_from_tnorm,
};
pub use generator::{f_implication, g_implication, Extended, FGenerator, GGenerator};
pub use properties::{
    check_implication_properties, check_implication_right_continuity, pointwise_leq, ImplicationReport, PROPERTY_TOL,
};

/// How an implication was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Builtin,
    Residual { from: String },
    AN { aggregation: String, negation: String },
    FGenerated { generator: String },
    GGenerated { generator: String },
    Probabilistic { copula: String },
    ProbabilisticS { copula: String },
    Custom,
}

/// Declared attributes. `None` means "not declared"; the property checker
/// decides those from samples.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ImplicationAttrs {
    pub right_continuous_in_second_arg: bool,
    pub np: Option<bool>,
    pub ip: Option<bool>,
    pub ep: Option<bool>,
    pub op: Option<bool>,
    /// Contraposition with respect to the standard negation.
    pub cp: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinImplication {
    Goguen,
    Godel,
    Lukasiewicz,
    KleeneDienes,
    Reichenbach,
    RescherGaines,
    Fodor,
}

impl BuiltinImplication {
    pub const ALL: [BuiltinImplication; 7] = [
        BuiltinImplication::Goguen,
        BuiltinImplication::Godel,
        BuiltinImplication::Lukasiewicz,
        BuiltinImplication::KleeneDienes,
        BuiltinImplication::Reichenbach,
        BuiltinImplication::RescherGaines,
        BuiltinImplication::Fodor,
    ];

    /// Order comparisons use [`SNAP`] so that rounding in upstream
    /// arithmetic does not flip a branch.
    #[inline]
    pub fn eval(self, x: f64, y: f64) -> f64 {
        use BuiltinImplication::*;
        match self {
            Goguen => {
                if x <= y + SNAP {
                    1.0
                } else {
                    y / x
                }
            }
            Godel => {
                if x <= y + SNAP {
                    1.0
                } else {
                    y
                }
            }
            Lukasiewicz => (1.0 - x + y).min(1.0),
            KleeneDienes => (1.0 - x).max(y),
            Reichenbach => 1.0 - x + x * y,
            RescherGaines => {
                if x <= y + SNAP {
                    1.0
                } else {
                    0.0
                }
            }
            Fodor => {
                if x <= y + SNAP {
                    1.0
                } else {
                    (1.0 - x).max(y)
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        use BuiltinImplication::*;
        match self {
            Goguen => "goguen",
            Godel => "godel",
            Lukasiewicz => "lukasiewicz",
            KleeneDienes => "kleene_dienes",
            Reichenbach => "reichenbach",
            RescherGaines => "rescher_gaines",
            Fodor => "fodor",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }

    pub fn attrs(self) -> ImplicationAttrs {
        use BuiltinImplication::*;
        let (np, ip, ep, op, cp) = match self {
            Goguen | Godel => (true, true, true, true, false),
            Lukasiewicz | Fodor => (true, true, true, true, true),
            KleeneDienes | Reichenbach => (true, false, true, false, true),
            RescherGaines => (false, true, false, true, true),
        };
        ImplicationAttrs {
            right_continuous_in_second_arg: true,
            np: Some(np),
            ip: Some(ip),
            ep: Some(ep),
            op: Some(op),
            cp: Some(cp),
        }
    }
}

#[derive(Clone)]
pub(crate) enum ImpKernel {
    Builtin(BuiltinImplication),
    Custom(BinaryFn),
}

/// A fuzzy implication (or, when uncertified, an implication-like function).
#[derive(Clone)]
pub struct Implication {
    name: String,
    kernel: ImpKernel,
    attrs: ImplicationAttrs,
    family: Family,
    certified: bool,
    warnings: Vec<String>,
    value_error: f64,
}

impl fmt::Debug for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Implication")
            .field("name", &self.name)
            .field("builtin", &self.builtin())
            .field("family", &self.family)
            .field("attrs", &self.attrs)
            .field("certified", &self.certified)
            .field("warnings", &self.warnings)
            .finish()
    }
}

impl Implication {
    pub fn from_builtin(b: BuiltinImplication) -> Self {
        Implication {
            name: b.name().into(),
            kernel: ImpKernel::Builtin(b),
            attrs: b.attrs(),
            family: Family::Builtin,
            certified: true,
            warnings: Vec::new(),
            value_error: 0.0,
        }
    }

    pub fn goguen() -> Self {
        Self::from_builtin(BuiltinImplication::Goguen)
    }

    pub fn godel() -> Self {
        Self::from_builtin(BuiltinImplication::Godel)
    }

    pub fn lukasiewicz() -> Self {
        Self::from_builtin(BuiltinImplication::Lukasiewicz)
    }

    pub fn kleene_dienes() -> Self {
        Self::from_builtin(BuiltinImplication::KleeneDienes)
    }

    pub fn reichenbach() -> Self {
        Self::from_builtin(BuiltinImplication::Reichenbach)
    }

    /// A user-supplied implication, certified only by the caller's say-so;
    /// use [`check_implication_properties`] to verify it.
    pub fn custom<F>(name: impl Into<String>, f: F, attrs: ImplicationAttrs) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Implication {
            name: name.into(),
            kernel: ImpKernel::Custom(Arc::new(f)),
            attrs,
            family: Family::Custom,
            certified: false,
            warnings: Vec::new(),
            value_error: 0.0,
        }
    }

    pub(crate) fn assemble(
        name: String,
        kernel: ImpKernel,
        attrs: ImplicationAttrs,
        family: Family,
        certified: bool,
        warnings: Vec<String>,
        value_error: f64,
    ) -> Self {
        Implication { name, kernel, attrs, family, certified, warnings, value_error }
    }

    /// The same function with its closed form hidden, so that residuation
    /// falls back to bisection.
    pub fn opaque(&self) -> Self {
        let mut out = self.clone();
        out.kernel = ImpKernel::Custom(self.as_fn());
        out
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match &self.kernel {
            ImpKernel::Builtin(b) => b.eval(x, y),
            ImpKernel::Custom(f) => f(x, y),
        }
    }

    pub fn apply(&self, x: UnitValue, y: UnitValue) -> Result<UnitValue> {
        UnitValue::new(self.eval(x.get(), y.get()))
    }

    pub(crate) fn as_fn(&self) -> BinaryFn {
        match &self.kernel {
            ImpKernel::Builtin(b) => {
                let b = *b;
                Arc::new(move |x, y| b.eval(x, y))
            }
            ImpKernel::Custom(f) => f.clone(),
        }
    }

    pub fn builtin(&self) -> Option<BuiltinImplication> {
        match self.kernel {
            ImpKernel::Builtin(b) => Some(b),
            ImpKernel::Custom(_) => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn attrs(&self) -> &ImplicationAttrs {
        &self.attrs
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Whether the function is known to satisfy (I1)–(I5).
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn value_error(&self) -> f64 {
        self.value_error
    }

    pub fn is_right_continuous(&self) -> bool {
        self.attrs.right_continuous_in_second_arg
    }
}

/// Looks up a builtin implication by its stable identifier.
pub fn builtin_implication(name: &str) -> Result<Implication> {
    BuiltinImplication::from_name(name)
        .map(Implication::from_builtin)
        .ok_or_else(|| Error::UnknownName { kind: "implication", name: name.into() })
}

/// (I1)–(I5) on `grid` with slack `tol`; the first failure, if any.
pub(crate) fn axiom_failure(i: &Implication, grid: &crate::numerics::Grid, tol: f64) -> Option<String> {
    let f = |x, y| i.eval(x, y);
    if let Some((p, d)) = crate::connectives::monotonicity_witness(&f, grid, -1, 1, tol) {
        return Some(format!("monotonicity fails at {p:?}: {d}"));
    }
    let corners = [((0.0, 0.0), 1.0, "I3"), ((1.0, 1.0), 1.0, "I4"), ((1.0, 0.0), 0.0, "I5")];
    for ((x, y), want, label) in corners {
        if (f(x, y) - want).abs() > tol {
            return Some(format!("{label}: I({x},{y}) = {}", f(x, y)));
        }
    }
    let range = grid.points().iter().flat_map(|&x| grid.points().iter().map(move |&y| (x, y)));
    for (x, y) in range {
        let v = f(x, y);
        if !(-tol..=1.0 + tol).contains(&v) || v.is_nan() {
            return Some(format!("value {v} at ({x},{y}) leaves [0, 1]"));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_examples() {
        assert_eq!(builtin_implication("goguen").unwrap().eval(0.5, 0.2), 0.4);
        assert_eq!(builtin_implication("godel").unwrap().eval(0.6, 0.4), 0.4);
        assert!((builtin_implication("lukasiewicz").unwrap().eval(0.7, 0.4) - 0.7).abs() < 1e-15);
        assert_eq!(builtin_implication("kleene_dienes").unwrap().eval(0.5, 0.5), 0.5);
        assert_eq!(builtin_implication("rescher_gaines").unwrap().eval(0.5, 0.4), 0.0);
        assert!((builtin_implication("fodor").unwrap().eval(0.7, 0.2) - 0.3).abs() < 1e-15);
        assert_eq!(builtin_implication("fodor").unwrap().eval(0.7, 0.7 - 1e-14), 1.0);
        assert!(matches!(builtin_implication("zadeh"), Err(Error::UnknownName { .. })));
    }

    #[test]
    fn builtins_are_implications() {
        let g = crate::numerics::Grid::new(101).unwrap();
        for b in BuiltinImplication::ALL {
            assert_eq!(axiom_failure(&Implication::from_builtin(b), &g, 0.0), None, "{}", b.name());
        }
    }
}
