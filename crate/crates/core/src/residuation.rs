//! Residual implications of aggregations and aggregations induced by
//! implications, with adjunction and round-trip checks.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::connectives::{Aggregation, AggregationAttrs, BinaryFn, BuiltinAggregation, Sided};
use crate::error::{Error, Result};
use crate::implications::{BuiltinImplication, Family, ImpKernel, Implication, ImplicationAttrs};
use crate::numerics::{inf_unchecked, sup_unchecked, Grid, Tolerance, SNAP};

/// Slack used by [`check_adjunction`] around the residuation boundary.
pub const ADJUNCTION_SLACK: f64 = 1e-6;

/// `I_A(x, y) = sup{z : A(x, z) ≤ y}`.
///
/// Closed forms are used for builtin aggregations with a known residual;
/// otherwise each value is found by bisection with the default tolerance.
pub fn residual_implication(a: &Aggregation) -> Implication {
    residual_implication_with(a, &Tolerance::default())
}

pub fn residual_implication_with(a: &Aggregation, tol: &Tolerance) -> Implication {
    let name = format!("residual({})", a.name());
    let warnings = residual_warnings(a);
    let certified = warnings.is_empty();
    let family = Family::Residual { from: a.name().into() };
    let rc_attrs = ImplicationAttrs { right_continuous_in_second_arg: true, ..Default::default() };

    let closed_builtin = match a.builtin() {
        Some(BuiltinAggregation::Min) => Some(BuiltinImplication::Godel),
        Some(BuiltinAggregation::Product) => Some(BuiltinImplication::Goguen),
        Some(BuiltinAggregation::LukasiewiczTnorm) => Some(BuiltinImplication::Lukasiewicz),
        Some(BuiltinAggregation::NilpotentMinimum) => Some(BuiltinImplication::Fodor),
        _ => None,
    };
    if let Some(b) = closed_builtin {
        return Implication::assemble(name, ImpKernel::Builtin(b), b.attrs(), family, certified, warnings, 0.0);
    }
    let closed: Option<BinaryFn> = match a.builtin() {
        Some(BuiltinAggregation::DrasticTnorm) => Some(Arc::new(|x, y| if x < 1.0 { 1.0 } else { y })),
        Some(BuiltinAggregation::ClaytonCopula { theta }) => Some(Arc::new(move |x: f64, y: f64| {
            if x <= y + SNAP {
                1.0
            } else if y == 0.0 {
                0.0
            } else {
                (y.powf(-theta) - x.powf(-theta) + 1.0).powf(-1.0 / theta).clamp(0.0, 1.0)
            }
        })),
        _ => None,
    };
    if let Some(f) = closed {
        return Implication::assemble(name, ImpKernel::Custom(f), rc_attrs, family, certified, warnings, 0.0);
    }

    let af = a.as_fn();
    let slack = a.value_error();
    let t = *tol;
    let func = move |x: f64, y: f64| sup_unchecked(|z| af(x, z) <= y + slack, &t);
    Implication::assemble(name, ImpKernel::Custom(Arc::new(func)), rc_attrs, family, certified, warnings, tol.eps())
}

/// Conditions under which `I_A` is a fuzzy implication: `A(1, y) > 0` for
/// `y > 0` and `A(0, y) = 0` for `y < 1`, checked on a 101-point grid.
fn residual_warnings(a: &Aggregation) -> Vec<String> {
    let grid = Grid::new(101).expect("static grid size");
    let mut out = Vec::new();
    if let Some(&y) = grid.points().iter().find(|&&y| y > 0.0 && a.eval(1.0, y) <= 0.0) {
        out.push(format!("A(1,{y}) = 0 with {y} > 0; the residual is not certified as an implication"));
    }
    if let Some(&y) = grid.points().iter().find(|&&y| y < 1.0 && a.eval(0.0, y) != 0.0) {
        out.push(format!("A(0,{y}) = {} with {y} < 1; the residual is not certified as an implication", a.eval(0.0, y)));
    }
    out
}

/// First grid `y < 1` with `I(1, y) = 1`, if any.
pub(crate) fn induction_condition_failure(i: &Implication) -> Option<f64> {
    let grid = Grid::new(101).expect("static grid size");
    grid.points().iter().copied().find(|&y| y < 1.0 && i.eval(1.0, y) >= 1.0)
}

/// `A_I(x, y) = inf{z : I(x, z) ≥ y}`.
///
/// Requires `I(1, y) < 1` for every grid `y < 1` so that the result is an
/// aggregation function.
pub fn induced_aggregation(i: &Implication) -> Result<Aggregation> {
    induced_aggregation_with(i, &Tolerance::default())
}

pub fn induced_aggregation_with(i: &Implication, tol: &Tolerance) -> Result<Aggregation> {
    if let Some(y) = induction_condition_failure(i) {
        return Err(Error::ConditionViolated(format!("{}(1, {y}) = 1 with {y} < 1", i.name())));
    }
    Ok(induced_aggregation_unchecked(i, tol))
}

/// `inf{z : I(x,z) >= y}` without checking that the result is an aggregation.
pub(crate) fn induced_aggregation_unchecked(i: &Implication, tol: &Tolerance) -> Aggregation {
    let b = i.builtin();
    let closed_builtin = match b {
        Some(BuiltinImplication::Goguen) => Some(BuiltinAggregation::Product),
        Some(BuiltinImplication::Godel) => Some(BuiltinAggregation::Min),
        Some(BuiltinImplication::Lukasiewicz) => Some(BuiltinAggregation::LukasiewiczTnorm),
        Some(BuiltinImplication::Fodor) => Some(BuiltinAggregation::NilpotentMinimum),
        _ => None,
    };
    if let Some(agg) = closed_builtin {
        return Aggregation::from_builtin(agg);
    }

    let name = format!("induced({})", i.name());
    let attrs = induced_attrs(i);
    let closed: Option<BinaryFn> = match b {
        Some(BuiltinImplication::KleeneDienes) => Some(Arc::new(|x, y| if 1.0 - x >= y - SNAP { 0.0 } else { y })),
        Some(BuiltinImplication::Reichenbach) => {
            Some(Arc::new(|x, y| if x > 0.0 { ((x + y - 1.0) / x).max(0.0) } else { 0.0 }))
        }
        Some(BuiltinImplication::RescherGaines) => Some(Arc::new(|x, y| if y > 0.0 { x } else { 0.0 })),
        _ => None,
    };
    if let Some(f) = closed {
        return Aggregation::from_parts(name, f, attrs, 0.0);
    }
    let f = i.as_fn();
    let slack = i.value_error();
    let t = *tol;
    let func = move |x: f64, y: f64| inf_unchecked(|z| f(x, z) >= y - slack, &t);
    Aggregation::from_parts(name, Arc::new(func), attrs, tol.eps())
}

/// Attributes of `A_I` that follow from those of `I`.
fn induced_attrs(i: &Implication) -> AggregationAttrs {
    let mut neutral = Vec::new();
    let np = i.attrs().np == Some(true);
    let op = i.attrs().op == Some(true);
    match (np, op) {
        (true, true) => neutral.push(Sided::both(1.0)),
        (true, false) => neutral.push(Sided::left(1.0)),
        (false, true) => neutral.push(Sided::right(1.0)),
        (false, false) => {}
    }
    AggregationAttrs {
        left_continuous_in_second_arg: i.is_right_continuous(),
        right_continuous_in_second_arg: false,
        neutral,
        annihilator: vec![Sided::both(0.0)],
        tags: Default::default(),
    }
}

/// First violation of `A(x, z) ≤ y ⇔ z ≤ I(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjunctionViolation {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// `A(x, z)`.
    pub a_xz: f64,
    /// `I(x, y)`.
    pub i_xy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjunctionReport {
    pub aggregation: String,
    pub implication: String,
    pub checked: usize,
    pub violation: Option<AdjunctionViolation>,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks the residuation property on `(x, y, z)` triples.
///
/// A triple violates it when one side holds and the other fails by more
/// than [`ADJUNCTION_SLACK`].
pub fn check_adjunction<T>(a: &Aggregation, i: &Implication, samples: T) -> AdjunctionReport
where
    T: IntoIterator<Item = (f64, f64, f64)>,
{
    let mut checked = 0;
    let mut violation = None;
    for (x, y, z) in samples {
        checked += 1;
        if let Some(v) = adjunction_violation(a, i, x, y, z) {
            violation = Some(v);
            break;
        }
    }
    AdjunctionReport { aggregation: a.name().into(), implication: i.name().into(), checked, violation }
}

pub(crate) fn adjunction_violation(a: &Aggregation, i: &Implication, x: f64, y: f64, z: f64) -> Option<AdjunctionViolation> {
    let a_xz = a.eval(x, z);
    let i_xy = i.eval(x, y);
    let forward_broken = a_xz <= y && z > i_xy + ADJUNCTION_SLACK;
    let backward_broken = z <= i_xy && a_xz > y + ADJUNCTION_SLACK;
    (forward_broken || backward_broken).then_some(AdjunctionViolation { x, y, z, a_xz, i_xy })
}

/// All `n³` triples of a grid, in lexicographic `(x, y, z)` order.
pub fn grid_triples(grid: &Grid) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
    let p = grid.points();
    p.iter().flat_map(move |&x| p.iter().flat_map(move |&y| p.iter().map(move |&z| (x, y, z))))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTrip {
    pub implication: String,
    pub max_gap: f64,
    /// `(x, y)` attaining the largest gap.
    pub worst: (f64, f64),
}

/// `max |I(x, y) - I_{A_I}(x, y)|` over the grid, with both the induced
/// aggregation and the residual computed by bisection.
pub fn roundtrip_check(i: &Implication, grid: &Grid) -> Result<RoundTrip> {
    if !i.is_right_continuous() {
        return Err(Error::NotRightContinuous(i.name().into()));
    }
    let a = induced_aggregation(&i.opaque())?;
    let back = residual_implication(&a.opaque());
    let mut max_gap = 0.0;
    let mut worst = (0.0, 0.0);
    for &x in grid.points() {
        for &y in grid.points() {
            let gap = (i.eval(x, y) - back.eval(x, y)).abs();
            if gap > max_gap {
                max_gap = gap;
                worst = (x, y);
            }
        }
    }
    Ok(RoundTrip { implication: i.name().into(), max_gap, worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectives::builtin_aggregation;
    use crate::implications::builtin_implication;

    fn agg(name: &str) -> Aggregation {
        builtin_aggregation(name, &[]).unwrap()
    }

    #[test]
    fn residual_of_product_bisection() {
        let i = residual_implication(&agg("product").opaque());
        assert!((i.eval(0.5, 0.2) - 0.4).abs() < 1e-8);
        assert_eq!(i.eval(0.0, 0.0), 1.0);
        let i = residual_implication(&agg("min").opaque());
        assert!((i.eval(0.6, 0.4) - 0.4).abs() < 1e-8);
    }

    #[test]
    fn residual_closed_forms() {
        assert_eq!(residual_implication(&agg("product")).builtin(), Some(BuiltinImplication::Goguen));
        assert_eq!(residual_implication(&agg("min")).builtin(), Some(BuiltinImplication::Godel));
        let c = Aggregation::clayton(2.0).unwrap();
        let closed = residual_implication(&c);
        let bisect = residual_implication(&c.opaque());
        let g = Grid::new(21).unwrap();
        for &x in g.points() {
            for &y in g.points() {
                assert!((closed.eval(x, y) - bisect.eval(x, y)).abs() < 1e-6, "({x},{y})");
            }
        }
        let d = agg("drastic_tnorm");
        let closed = residual_implication(&d);
        let bisect = residual_implication(&d.opaque());
        for &x in g.points() {
            for &y in g.points() {
                assert!((closed.eval(x, y) - bisect.eval(x, y)).abs() < 1e-6, "({x},{y})");
            }
        }
    }

    #[test]
    fn residual_certificates() {
        assert!(residual_implication(&agg("product")).is_certified());
        // max(0, y) = y > 0 but A(0, y) = y != 0
        let r = residual_implication(&agg("max"));
        assert!(!r.is_certified());
        assert!(!r.warnings().is_empty());
    }

    #[test]
    fn induced_examples() {
        let a = induced_aggregation(&Implication::goguen().opaque()).unwrap();
        assert!((a.eval(0.5, 0.4) - 0.2).abs() < 1e-8);
        let a = induced_aggregation(&Implication::godel().opaque()).unwrap();
        assert!((a.eval(0.6, 0.4) - 0.4).abs() < 1e-8);
        for y in [0.0, 0.3, 1.0] {
            assert_eq!(a.eval(0.0, y), 0.0);
        }
        assert_eq!(induced_aggregation(&Implication::goguen()).unwrap().builtin(), Some(BuiltinAggregation::Product));
    }

    #[test]
    fn induced_closed_forms_match_bisection() {
        let g = Grid::new(21).unwrap();
        for name in ["kleene_dienes", "reichenbach", "rescher_gaines"] {
            let i = builtin_implication(name).unwrap();
            let closed = induced_aggregation(&i).unwrap();
            let bisect = induced_aggregation(&i.opaque()).unwrap();
            for &x in g.points() {
                for &y in g.points() {
                    if name == "kleene_dienes" && (1.0 - x - y).abs() < 1e-9 {
                        // the jump sits exactly on this line; rounding in 1 - x decides the side
                        continue;
                    }
                    assert!((closed.eval(x, y) - bisect.eval(x, y)).abs() < 1e-6, "{name} ({x},{y})");
                }
            }
        }
    }

    #[test]
    fn induction_condition_enforced() {
        // I(1, y) = 1 for all y
        let i = Implication::custom("top", |_, _| 1.0, Default::default());
        assert!(matches!(induced_aggregation(&i), Err(Error::ConditionViolated(_))));
    }

    #[test]
    fn adjunction_known_pairs() {
        let g = Grid::new(11).unwrap();
        assert!(check_adjunction(&agg("product"), &Implication::goguen(), grid_triples(&g)).holds());
        assert!(check_adjunction(&agg("min"), &Implication::godel(), grid_triples(&g)).holds());
        let r = check_adjunction(&agg("product"), &Implication::kleene_dienes(), grid_triples(&g));
        let v = r.violation.unwrap();
        let lhs = v.x * v.z <= v.y;
        let rhs = v.z <= (1.0 - v.x).max(v.y);
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn roundtrip_goguen() {
        let r = roundtrip_check(&Implication::goguen(), &Grid::new(21).unwrap()).unwrap();
        assert!(r.max_gap <= 1e-6, "{r:?}");
    }
}
