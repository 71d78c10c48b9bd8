use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Grid, UnitValue, SNAP};
use crate::verdict::Check;

pub(crate) type BinaryFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Which argument position a neutral element or annihilator acts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
    Both,
}

impl Side {
    pub fn covers_left(self) -> bool {
        matches!(self, Side::Left | Side::Both)
    }

    pub fn covers_right(self) -> bool {
        matches!(self, Side::Right | Side::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sided {
    pub value: f64,
    pub side: Side,
}

impl Sided {
    pub fn both(value: f64) -> Self {
        Sided { value, side: Side::Both }
    }

    pub fn left(value: f64) -> Self {
        Sided { value, side: Side::Left }
    }

    pub fn right(value: f64) -> Self {
        Sided { value, side: Side::Right }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    Commutative,
    Associative,
    Conjunctive,
    Disjunctive,
    Averaging,
    Semicopula,
    Tnorm,
    Tconorm,
    Copula,
}

impl ClassTag {
    pub const ALL: [ClassTag; 9] = [
        ClassTag::Commutative,
        ClassTag::Associative,
        ClassTag::Conjunctive,
        ClassTag::Disjunctive,
        ClassTag::Averaging,
        ClassTag::Semicopula,
        ClassTag::Tnorm,
        ClassTag::Tconorm,
        ClassTag::Copula,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassTag::Commutative => "commutative",
            ClassTag::Associative => "associative",
            ClassTag::Conjunctive => "conjunctive",
            ClassTag::Disjunctive => "disjunctive",
            ClassTag::Averaging => "averaging",
            ClassTag::Semicopula => "semicopula",
            ClassTag::Tnorm => "tnorm",
            ClassTag::Tconorm => "tconorm",
            ClassTag::Copula => "copula",
        }
    }
}

/// Declared analytic attributes of a binary aggregation.
///
/// Continuity cannot be decided from samples, so it is declared here and
/// only cross-checked by the jump scan in [`crate::connectives::classify`].
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AggregationAttrs {
    pub left_continuous_in_second_arg: bool,
    pub right_continuous_in_second_arg: bool,
    pub neutral: Vec<Sided>,
    pub annihilator: Vec<Sided>,
    pub tags: BTreeSet<ClassTag>,
}

impl AggregationAttrs {
    fn continuous(neutral: Vec<Sided>, annihilator: Vec<Sided>, tags: &[ClassTag]) -> Self {
        AggregationAttrs {
            left_continuous_in_second_arg: true,
            right_continuous_in_second_arg: true,
            neutral,
            annihilator,
            tags: tags.iter().copied().collect(),
        }
    }
}

/// Closed-form aggregations shipped with the library.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinAggregation {
    Min,
    Product,
    LukasiewiczTnorm,
    DrasticTnorm,
    NilpotentMinimum,
    Max,
    ProbabilisticSum,
    LukasiewiczTconorm,
    ArithmeticMean,
    GeometricMean,
    ProjectionSecond,
    ClaytonCopula { theta: f64 },
}

impl BuiltinAggregation {
    pub const NAMES: [&'static str; 12] = [
        "min",
        "product",
        "lukasiewicz_tnorm",
        "drastic_tnorm",
        "nilpotent_minimum",
        "max",
        "probabilistic_sum",
        "lukasiewicz_tconorm",
        "arithmetic_mean",
        "geometric_mean",
        "projection_second",
        "clayton_copula",
    ];

    #[inline]
    pub fn eval(self, x: f64, y: f64) -> f64 {
        use BuiltinAggregation::*;
        match self {
            Min => x.min(y),
            Product => x * y,
            LukasiewiczTnorm => (x + y - 1.0).max(0.0),
            DrasticTnorm => {
                if x == 1.0 {
                    y
                } else if y == 1.0 {
                    x
                } else {
                    0.0
                }
            }
            NilpotentMinimum => {
                if x + y > 1.0 + SNAP {
                    x.min(y)
                } else {
                    0.0
                }
            }
            Max => x.max(y),
            ProbabilisticSum => 1.0 - (1.0 - x) * (1.0 - y),
            LukasiewiczTconorm => (x + y).min(1.0),
            ArithmeticMean => 0.5 * (x + y),
            GeometricMean => (x * y).sqrt(),
            ProjectionSecond => y,
            ClaytonCopula { theta } => {
                if x == 0.0 || y == 0.0 {
                    0.0
                } else if x == 1.0 {
                    y
                } else if y == 1.0 {
                    x
                } else {
                    (x.powf(-theta) + y.powf(-theta) - 1.0).powf(-1.0 / theta).clamp(0.0, 1.0)
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        use BuiltinAggregation::*;
        match self {
            Min => "min",
            Product => "product",
            LukasiewiczTnorm => "lukasiewicz_tnorm",
            DrasticTnorm => "drastic_tnorm",
            NilpotentMinimum => "nilpotent_minimum",
            Max => "max",
            ProbabilisticSum => "probabilistic_sum",
            LukasiewiczTconorm => "lukasiewicz_tconorm",
            ArithmeticMean => "arithmetic_mean",
            GeometricMean => "geometric_mean",
            ProjectionSecond => "projection_second",
            ClaytonCopula { .. } => "clayton_copula",
        }
    }

    fn attrs(self) -> AggregationAttrs {
        use BuiltinAggregation::*;
        use ClassTag::*;
        let tnorm = [Commutative, Associative, Conjunctive, Semicopula, Tnorm];
        let copula = [Commutative, Associative, Conjunctive, Semicopula, Tnorm, Copula];
        let tconorm = [Commutative, Associative, Disjunctive, Tconorm];
        let one = || vec![Sided::both(1.0)];
        let zero = || vec![Sided::both(0.0)];
        match self {
            Min => AggregationAttrs::continuous(
                one(),
                zero(),
                &[Commutative, Associative, Conjunctive, Averaging, Semicopula, Tnorm, Copula],
            ),
            Product | LukasiewiczTnorm | ClaytonCopula { .. } => AggregationAttrs::continuous(one(), zero(), &copula),
            DrasticTnorm => AggregationAttrs {
                left_continuous_in_second_arg: false,
                right_continuous_in_second_arg: true,
                ..AggregationAttrs::continuous(one(), zero(), &tnorm)
            },
            NilpotentMinimum => AggregationAttrs {
                left_continuous_in_second_arg: true,
                right_continuous_in_second_arg: false,
                ..AggregationAttrs::continuous(one(), zero(), &tnorm)
            },
            Max => AggregationAttrs::continuous(
                zero(),
                one(),
                &[Commutative, Associative, Disjunctive, Averaging, Tconorm],
            ),
            ProbabilisticSum | LukasiewiczTconorm => AggregationAttrs::continuous(zero(), one(), &tconorm),
            ArithmeticMean => AggregationAttrs::continuous(vec![], vec![], &[Commutative, Averaging]),
            GeometricMean => AggregationAttrs::continuous(vec![], zero(), &[Commutative, Averaging]),
            ProjectionSecond => AggregationAttrs::continuous(
                vec![Sided::left(0.0), Sided::left(1.0)],
                vec![Sided::right(0.0), Sided::right(1.0)],
                &[Associative, Averaging],
            ),
        }
    }
}

#[derive(Clone)]
pub(crate) enum AggKernel {
    Builtin(BuiltinAggregation),
    Custom(BinaryFn),
}

/// A binary aggregation function with its declared attributes.
#[derive(Clone)]
pub struct Aggregation {
    name: String,
    kernel: AggKernel,
    attrs: AggregationAttrs,
    value_error: f64,
}

impl fmt::Debug for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Aggregation")
            .field("name", &self.name)
            .field("builtin", &self.builtin())
            .field("attrs", &self.attrs)
            .field("value_error", &self.value_error)
            .finish()
    }
}

impl Aggregation {
    pub fn builtin(&self) -> Option<BuiltinAggregation> {
        match self.kernel {
            AggKernel::Builtin(b) => Some(b),
            AggKernel::Custom(_) => None,
        }
    }

    pub fn from_builtin(b: BuiltinAggregation) -> Self {
        Aggregation { name: b.name().into(), kernel: AggKernel::Builtin(b), attrs: b.attrs(), value_error: 0.0 }
    }

    pub fn min() -> Self {
        Self::from_builtin(BuiltinAggregation::Min)
    }

    pub fn product() -> Self {
        Self::from_builtin(BuiltinAggregation::Product)
    }

    pub fn lukasiewicz_tnorm() -> Self {
        Self::from_builtin(BuiltinAggregation::LukasiewiczTnorm)
    }

    pub fn max() -> Self {
        Self::from_builtin(BuiltinAggregation::Max)
    }

    pub fn probabilistic_sum() -> Self {
        Self::from_builtin(BuiltinAggregation::ProbabilisticSum)
    }

    pub fn clayton(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::InvalidParameters {
                name: "clayton_copula".into(),
                reason: format!("theta must be positive and finite, got {theta}"),
            });
        }
        Ok(Self::from_builtin(BuiltinAggregation::ClaytonCopula { theta }))
    }

    /// A user-supplied aggregation. Nothing is verified here; run
    /// [`check_aggregation_axioms`] and [`crate::connectives::classify`].
    pub fn custom<F>(name: impl Into<String>, f: F, attrs: AggregationAttrs) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Aggregation { name: name.into(), kernel: AggKernel::Custom(Arc::new(f)), attrs, value_error: 0.0 }
    }

    pub(crate) fn from_parts(name: String, func: BinaryFn, attrs: AggregationAttrs, value_error: f64) -> Self {
        Aggregation { name, kernel: AggKernel::Custom(func), attrs, value_error }
    }

    /// The same function with its closed form hidden, so that residuation
    /// falls back to bisection.
    pub fn opaque(&self) -> Self {
        let func: BinaryFn = match &self.kernel {
            AggKernel::Builtin(b) => {
                let b = *b;
                Arc::new(move |x, y| b.eval(x, y))
            }
            AggKernel::Custom(f) => f.clone(),
        };
        Aggregation { name: self.name.clone(), kernel: AggKernel::Custom(func), attrs: self.attrs.clone(), value_error: self.value_error }
    }

    pub fn with_attrs(mut self, attrs: AggregationAttrs) -> Self {
        self.attrs = attrs;
        self
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match &self.kernel {
            AggKernel::Builtin(b) => b.eval(x, y),
            AggKernel::Custom(f) => f(x, y),
        }
    }

    pub fn apply(&self, x: UnitValue, y: UnitValue) -> Result<UnitValue> {
        UnitValue::new(self.eval(x.get(), y.get()))
    }

    pub(crate) fn as_fn(&self) -> BinaryFn {
        match &self.kernel {
            AggKernel::Builtin(b) => {
                let b = *b;
                Arc::new(move |x, y| b.eval(x, y))
            }
            AggKernel::Custom(f) => f.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn attrs(&self) -> &AggregationAttrs {
        &self.attrs
    }

    /// Upper bound on the absolute error of each evaluation; nonzero only
    /// for functions computed by bisection.
    pub fn value_error(&self) -> f64 {
        self.value_error
    }

    pub fn has_tag(&self, tag: ClassTag) -> bool {
        self.attrs.tags.contains(&tag)
    }

    pub fn has_left_neutral(&self, e: f64) -> bool {
        self.attrs.neutral.iter().any(|s| s.value == e && s.side.covers_left())
    }

    pub fn has_right_neutral(&self, e: f64) -> bool {
        self.attrs.neutral.iter().any(|s| s.value == e && s.side.covers_right())
    }

    pub fn has_left_annihilator(&self, a: f64) -> bool {
        self.attrs.annihilator.iter().any(|s| s.value == a && s.side.covers_left())
    }

    pub fn has_annihilator(&self, a: f64) -> bool {
        let left = self.attrs.annihilator.iter().any(|s| s.value == a && s.side.covers_left());
        let right = self.attrs.annihilator.iter().any(|s| s.value == a && s.side.covers_right());
        left && right
    }

    /// Left fold over `values`; `None` for an empty slice.
    pub fn fold(&self, values: &[f64]) -> Option<f64> {
        let (first, rest) = values.split_first()?;
        Some(rest.iter().fold(*first, |acc, &v| self.eval(acc, v)))
    }
}

/// Looks up a builtin aggregation by its stable identifier.
pub fn builtin_aggregation(name: &str, params: &[f64]) -> Result<Aggregation> {
    use BuiltinAggregation::*;
    let expect_params = |n: usize| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidParameters {
                name: name.into(),
                reason: format!("expected {n} parameter(s), got {}", params.len()),
            })
        }
    };
    let b = match name {
        "clayton_copula" => {
            expect_params(1)?;
            return Aggregation::clayton(params[0]);
        }
        "min" => Min,
        "product" => Product,
        "lukasiewicz_tnorm" => LukasiewiczTnorm,
        "drastic_tnorm" => DrasticTnorm,
        "nilpotent_minimum" => NilpotentMinimum,
        "max" => Max,
        "probabilistic_sum" => ProbabilisticSum,
        "lukasiewicz_tconorm" => LukasiewiczTconorm,
        "arithmetic_mean" => ArithmeticMean,
        "geometric_mean" => GeometricMean,
        "projection_second" => ProjectionSecond,
        _ => return Err(Error::UnknownName { kind: "aggregation", name: name.into() }),
    };
    expect_params(0)?;
    Ok(Aggregation::from_builtin(b))
}

/// Verdicts for the boundary conditions (A1) and monotonicity (A2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub a1: Check,
    pub a2: Check,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.a1.holds && self.a2.holds
    }
}

pub fn check_aggregation_axioms(a: &Aggregation, grid: &Grid) -> AxiomReport {
    let (lo, hi) = (a.eval(0.0, 0.0), a.eval(1.0, 1.0));
    let a1 = if lo != 0.0 {
        Check::fail("A1", vec![0.0, 0.0], format!("A(0,0) = {lo}"))
    } else if hi != 1.0 {
        Check::fail("A1", vec![1.0, 1.0], format!("A(1,1) = {hi}"))
    } else {
        Check::pass("A1")
    };
    let a2 = Check::from_search("A2", monotonicity_witness(&|x, y| a.eval(x, y), grid, 1, 1, 1e-12 + a.value_error()));
    AxiomReport { a1, a2 }
}

/// First grid pair where `f` breaks monotonicity by more than `slack`.
/// `dir_x`/`dir_y` are `1` for nondecreasing and `-1` for nonincreasing in
/// that argument.
pub(crate) fn monotonicity_witness(
    f: &dyn Fn(f64, f64) -> f64,
    grid: &Grid,
    dir_x: i8,
    dir_y: i8,
    slack: f64,
) -> Option<(Vec<f64>, String)> {
    let pts = grid.points();
    let n = pts.len();
    let v: Vec<f64> = pts.iter().flat_map(|&x| pts.iter().map(move |&y| f(x, y))).collect();
    let at = |i: usize, j: usize| v[i * n + j];
    for i in 0..n {
        for j in 0..n {
            if j + 1 < n {
                let d = (at(i, j + 1) - at(i, j)) * dir_y as f64;
                if d < -slack {
                    return Some((
                        vec![pts[i], pts[j], pts[j + 1]],
                        format!("second argument: f({}, {}) = {} vs f({}, {}) = {}", pts[i], pts[j], at(i, j), pts[i], pts[j + 1], at(i, j + 1)),
                    ));
                }
            }
            if i + 1 < n {
                let d = (at(i + 1, j) - at(i, j)) * dir_x as f64;
                if d < -slack {
                    return Some((
                        vec![pts[i], pts[i + 1], pts[j]],
                        format!("first argument: f({}, {}) = {} vs f({}, {}) = {}", pts[i], pts[j], at(i, j), pts[i + 1], pts[j], at(i + 1, j)),
                    ));
                }
            }
        }
    }
    None
}
