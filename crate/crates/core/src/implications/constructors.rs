use std::sync::Arc;

use super::{axiom_failure, Family, ImpKernel, Implication, ImplicationAttrs};
use crate::connectives::{Aggregation, ClassTag, Negation};
use crate::error::{Error, Result};
use crate::numerics::Grid;
use crate::residuation::residual_implication;

/// `I_T(x, y) = sup{z : T(x, z) ≤ y}` for a t-norm `T`.
pub fn r_implication_from_tnorm(t: &Aggregation) -> Result<Implication> {
    if !t.has_tag(ClassTag::Tnorm) {
        return Err(Error::NotATNorm(t.name().into()));
    }
    Ok(residual_implication(t))
}

/// `I(x, y) = A(N(x), y)` for a disjunctor `A`.
///
/// `A` must have 1 as annihilator, checked on a 101-point grid.
pub fn an_implication(a: &Aggregation, n: &Negation) -> Result<Implication> {
    let grid = Grid::new(101)?;
    let absorbs = grid.points().iter().all(|&t| a.eval(1.0, t) == 1.0 && a.eval(t, 1.0) == 1.0);
    if !absorbs {
        return Err(Error::NotADisjunctor(a.name().into()));
    }
    let (af, nf) = (a.as_fn(), n.clone());
    let func = move |x: f64, y: f64| af(nf.eval(x), y);
    let attrs = ImplicationAttrs {
        right_continuous_in_second_arg: a.attrs().right_continuous_in_second_arg,
        np: Some(a.has_left_neutral(0.0)),
        ..Default::default()
    };
    Ok(certify(
        format!("an({},{})", a.name(), n.name()),
        Arc::new(func),
        attrs,
        Family::AN { aggregation: a.name().into(), negation: n.name().into() },
        a.value_error(),
    ))
}

fn require_copula(c: &Aggregation) -> Result<()> {
    if c.has_tag(ClassTag::Copula) {
        Ok(())
    } else {
        Err(Error::NotACopula(c.name().into()))
    }
}

/// `I_C(x, y) = C(x, y) / x` for `x > 0`, else 1.
///
/// Not every copula yields a fuzzy implication this way; the result is
/// certified only if (I1)–(I5) hold on a 101-point grid.
pub fn probabilistic_implication(c: &Aggregation) -> Result<Implication> {
    require_copula(c)?;
    let cf = c.as_fn();
    let func = move |x: f64, y: f64| if x > 0.0 { (cf(x, y) / x).clamp(0.0, 1.0) } else { 1.0 };
    let attrs = ImplicationAttrs {
        right_continuous_in_second_arg: c.attrs().right_continuous_in_second_arg,
        np: Some(true),
        ..Default::default()
    };
    Ok(certify(
        format!("probabilistic({})", c.name()),
        Arc::new(func),
        attrs,
        Family::Probabilistic { copula: c.name().into() },
        c.value_error(),
    ))
}

/// `Ĩ_C(x, y) = C(x, y) - x + 1`.
pub fn probabilistic_s_implication(c: &Aggregation) -> Result<Implication> {
    require_copula(c)?;
    let cf = c.as_fn();
    let func = move |x: f64, y: f64| (cf(x, y) - x + 1.0).clamp(0.0, 1.0);
    let attrs = ImplicationAttrs {
        right_continuous_in_second_arg: c.attrs().right_continuous_in_second_arg,
        np: Some(true),
        ..Default::default()
    };
    Ok(certify(
        format!("probabilistic_s({})", c.name()),
        Arc::new(func),
        attrs,
        Family::ProbabilisticS { copula: c.name().into() },
        c.value_error(),
    ))
}

fn certify(
    name: String,
    func: crate::connectives::BinaryFn,
    attrs: ImplicationAttrs,
    family: Family,
    value_error: f64,
) -> Implication {
    let draft = Implication::assemble(name.clone(), ImpKernel::Custom(func.clone()), attrs.clone(), family.clone(), false, vec![], value_error);
    let grid = Grid::new(101).expect("static grid size");
    let failure = axiom_failure(&draft, &grid, 1e-12 + value_error);
    let certified = failure.is_none();
    let warnings = failure.into_iter().map(|f| format!("not a fuzzy implication: {f}")).collect();
    Implication::assemble(name, ImpKernel::Custom(func), attrs, family, certified, warnings, value_error)
}
