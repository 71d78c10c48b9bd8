//! Yager's f- and g-generated implications.
//!
//! Generator values live in `[0, ∞]`. Infinity is an explicit variant so
//! that the two products `0 × ∞` can follow their own conventions.

use std::fmt;
use std::sync::Arc;

use super::{Family, ImpKernel, Implication, ImplicationAttrs};
use crate::error::{Error, Result};
use crate::numerics::{inf_unchecked, sup_unchecked, Grid, Tolerance};

/// A value in `[0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinity,
}

impl Extended {
    fn le(self, other: Extended) -> bool {
        match (self, other) {
            (_, Extended::Infinity) => true,
            (Extended::Infinity, Extended::Finite(_)) => false,
            (Extended::Finite(a), Extended::Finite(b)) => a <= b,
        }
    }

    fn lt(self, other: Extended) -> bool {
        self.le(other) && self != other
    }
}

type GenFn = Arc<dyn Fn(f64) -> Extended + Send + Sync>;
type InvFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Strictly decreasing continuous `f: [0,1] → [0,∞]` with `f(1) = 0`.
#[derive(Clone)]
pub struct FGenerator {
    name: String,
    f: GenFn,
    inverse: Option<InvFn>,
}

/// Strictly increasing continuous `g: [0,1] → [0,∞]` with `g(0) = 0`.
#[derive(Clone)]
pub struct GGenerator {
    name: String,
    g: GenFn,
    inverse: Option<InvFn>,
}

impl fmt::Debug for FGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FGenerator({})", self.name)
    }
}

impl fmt::Debug for GGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GGenerator({})", self.name)
    }
}

fn validate(name: &str, gen: &GenFn, increasing: bool) -> Result<()> {
    let bad = |reason: String| Error::InvalidGenerator { name: name.into(), reason };
    let (anchor, anchor_label) = if increasing { (0.0, "g(0)") } else { (1.0, "f(1)") };
    if gen(anchor) != Extended::Finite(0.0) {
        return Err(bad(format!("{anchor_label} must be 0")));
    }
    let grid = Grid::new(101)?;
    let vals: Vec<Extended> = grid.points().iter().map(|&t| gen(t)).collect();
    for (k, v) in vals.iter().enumerate() {
        if let Extended::Finite(v) = v {
            if !(*v >= 0.0) {
                return Err(bad(format!("negative or NaN value {v} at t = {}", grid.points()[k])));
            }
        }
    }
    for (k, w) in vals.windows(2).enumerate() {
        let ok = if increasing { w[0].lt(w[1]) } else { w[1].lt(w[0]) };
        if !ok {
            let dir = if increasing { "increasing" } else { "decreasing" };
            return Err(bad(format!("not strictly {dir} between t = {} and {}", grid.points()[k], grid.points()[k + 1])));
        }
    }
    Ok(())
}

impl FGenerator {
    /// Validates strict decrease on a 101-point grid and `f(1) = 0`.
    pub fn new<F>(name: impl Into<String>, f: F, inverse: Option<InvFn>) -> Result<Self>
    where
        F: Fn(f64) -> Extended + Send + Sync + 'static,
    {
        let name = name.into();
        let f: GenFn = Arc::new(f);
        validate(&name, &f, false)?;
        Ok(FGenerator { name, f, inverse })
    }

    /// `f(t) = -ln t`, giving `I(x, y) = y^x`.
    pub fn neg_log() -> Self {
        FGenerator {
            name: "neg_log".into(),
            f: Arc::new(|t| if t == 0.0 { Extended::Infinity } else { Extended::Finite(-t.ln()) }),
            inverse: Some(Arc::new(|u| (-u).exp())),
        }
    }

    /// `f(t) = 1 - t`, giving Reichenbach's implication.
    pub fn one_minus() -> Self {
        FGenerator {
            name: "one_minus".into(),
            f: Arc::new(|t| Extended::Finite(1.0 - t)),
            inverse: Some(Arc::new(|u| 1.0 - u)),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "neg_log" => Ok(Self::neg_log()),
            "one_minus" => Ok(Self::one_minus()),
            _ => Err(Error::UnknownName { kind: "f-generator", name: name.into() }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: f64) -> Extended {
        (self.f)(t)
    }

    /// `f⁻¹(u)` for `u ≤ f(0)`, else 0.
    pub fn pseudo_inverse(&self, u: Extended) -> f64 {
        let f0 = (self.f)(0.0);
        if !u.le(f0) {
            return 0.0;
        }
        match u {
            // only reachable when f(0) = ∞
            Extended::Infinity => 0.0,
            Extended::Finite(u) => match &self.inverse {
                Some(inv) => inv(u).clamp(0.0, 1.0),
                None => inf_unchecked(|t| (self.f)(t).le(Extended::Finite(u)), &Tolerance::default()),
            },
        }
    }
}

impl GGenerator {
    /// Validates strict increase on a 101-point grid and `g(0) = 0`.
    pub fn new<F>(name: impl Into<String>, g: F, inverse: Option<InvFn>) -> Result<Self>
    where
        F: Fn(f64) -> Extended + Send + Sync + 'static,
    {
        let name = name.into();
        let g: GenFn = Arc::new(g);
        validate(&name, &g, true)?;
        Ok(GGenerator { name, g, inverse })
    }

    /// `g(t) = t`, giving Goguen's implication.
    pub fn identity() -> Self {
        GGenerator {
            name: "identity".into(),
            g: Arc::new(Extended::Finite),
            inverse: Some(Arc::new(|u| u)),
        }
    }

    /// `g(t) = -ln(1 - t)`.
    pub fn neg_log_complement() -> Self {
        GGenerator {
            name: "neg_log_complement".into(),
            g: Arc::new(|t| if t == 1.0 { Extended::Infinity } else { Extended::Finite(-(1.0 - t).ln()) }),
            inverse: Some(Arc::new(|u| 1.0 - (-u).exp())),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "identity" => Ok(Self::identity()),
            "neg_log_complement" => Ok(Self::neg_log_complement()),
            _ => Err(Error::UnknownName { kind: "g-generator", name: name.into() }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: f64) -> Extended {
        (self.g)(t)
    }

    /// `g⁻¹(u)` for `u ≤ g(1)`, else 1.
    pub fn pseudo_inverse(&self, u: Extended) -> f64 {
        let g1 = (self.g)(1.0);
        if !u.le(g1) {
            return 1.0;
        }
        match u {
            // only reachable when g(1) = ∞
            Extended::Infinity => 1.0,
            Extended::Finite(u) => match &self.inverse {
                Some(inv) => inv(u).clamp(0.0, 1.0),
                None => sup_unchecked(|t| (self.g)(t).le(Extended::Finite(u)), &Tolerance::default()),
            },
        }
    }
}

/// `I(x, y) = f⁽⁻¹⁾(x · f(y))` with `0 × ∞ = 0`.
pub fn f_implication(f: &FGenerator) -> Implication {
    let gen = f.clone();
    let func = move |x: f64, y: f64| {
        let prod = if x == 0.0 {
            Extended::Finite(0.0)
        } else {
            match gen.eval(y) {
                Extended::Infinity => Extended::Infinity,
                Extended::Finite(v) => Extended::Finite(x * v),
            }
        };
        gen.pseudo_inverse(prod)
    };
    let attrs = ImplicationAttrs { right_continuous_in_second_arg: true, np: Some(true), ep: Some(true), ..Default::default() };
    Implication::assemble(
        format!("f_implication({})", f.name),
        ImpKernel::Custom(Arc::new(func)),
        attrs,
        Family::FGenerated { generator: f.name.clone() },
        true,
        Vec::new(),
        0.0,
    )
}

/// `I(x, y) = g⁽⁻¹⁾(g(y) / x)` with `g(y) / 0 = ∞` (the `0 × ∞ = ∞` reading).
pub fn g_implication(g: &GGenerator) -> Implication {
    let gen = g.clone();
    let func = move |x: f64, y: f64| {
        let quot = if x == 0.0 {
            Extended::Infinity
        } else {
            match gen.eval(y) {
                Extended::Infinity => Extended::Infinity,
                Extended::Finite(v) => Extended::Finite(v / x),
            }
        };
        gen.pseudo_inverse(quot)
    };
    let attrs = ImplicationAttrs { right_continuous_in_second_arg: true, np: Some(true), ..Default::default() };
    Implication::assemble(
        format!("g_implication({})", g.name),
        ImpKernel::Custom(Arc::new(func)),
        attrs,
        Family::GGenerated { generator: g.name.clone() },
        true,
        Vec::new(),
        0.0,
    )
}
