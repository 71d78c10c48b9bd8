use serde::{Deserialize, Serialize};

use crate::connectives::{Aggregation, ClassTag};
use crate::error::{Error, Result};
use crate::fuzzy::DiscreteFuzzySet;
use crate::implications::Implication;
use crate::numerics::{Grid, Tolerance, UnitValue};
use crate::residuation::{induced_aggregation_unchecked, induction_condition_failure, residual_implication};
use crate::verdict::Check;

/// An AQIP conclusion together with any hypothesis it was computed outside of.
#[derive(Debug, Clone, PartialEq)]
pub struct AqipSolution {
    pub conclusion: DiscreteFuzzySet,
    pub warnings: Vec<String>,
}

fn hypothesis_warnings(i: &Implication) -> Vec<String> {
    let mut w = Vec::new();
    if !i.is_right_continuous() {
        w.push(format!("{} is not declared right-continuous in its second argument; the solution may not be unique", i.name()));
    }
    if let Some(y) = induction_condition_failure(i) {
        w.push(format!("{}(1, {y}) = 1 with {y} < 1; the induced operator may not be an aggregation function", i.name()));
    }
    w
}

#[inline]
fn objective(i: &Implication, premise: f64, fact: f64, conclusion: f64, candidate: f64, antecedent: f64) -> f64 {
    i.eval(i.eval(antecedent, conclusion), i.eval(i.eval(premise, fact), i.eval(premise, candidate)))
}

/// `M(x, y) = I(I(D(x), B(y)), I(I(D'(x), D(x)), I(D'(x), C(y))))` for a candidate `C`.
pub fn qip_objective_fmp(
    dprime: &DiscreteFuzzySet,
    d: &DiscreteFuzzySet,
    b: &DiscreteFuzzySet,
    candidate: &DiscreteFuzzySet,
    i: &Implication,
    x: &str,
    y: &str,
) -> Result<UnitValue> {
    d.same_universe(dprime)?;
    b.same_universe(candidate)?;
    let (dx, dpx) = (d.get(x)?, dprime.get(x)?);
    let (by, cy) = (b.get(y)?, candidate.get(y)?);
    UnitValue::new(objective(i, dpx, dx, by, cy, dx))
}

/// `N(x, y) = I(I(D(x), B(y)), I(I(B(y), B'(y)), I(D(x), C(x))))` for a candidate `C`.
pub fn qip_objective_fmt(
    d: &DiscreteFuzzySet,
    b: &DiscreteFuzzySet,
    bprime: &DiscreteFuzzySet,
    candidate: &DiscreteFuzzySet,
    i: &Implication,
    x: &str,
    y: &str,
) -> Result<UnitValue> {
    b.same_universe(bprime)?;
    d.same_universe(candidate)?;
    let (dx, cx) = (d.get(x)?, candidate.get(x)?);
    let (by, bpy) = (b.get(y)?, bprime.get(y)?);
    UnitValue::new(fmt_objective(i, dx, by, bpy, cx))
}

#[inline]
fn fmt_objective(i: &Implication, dx: f64, by: f64, bpy: f64, cx: f64) -> f64 {
    i.eval(i.eval(dx, by), i.eval(i.eval(by, bpy), i.eval(dx, cx)))
}

/// FMP conclusion
/// `B'(y) = max_x A_I(A_I(D'(x), A_I(I(D'(x), D(x)), I(D(x), B(y)))), 1)`
/// with `A_I` the aggregation induced by `I`.
pub fn aqip_fmp(dprime: &DiscreteFuzzySet, d: &DiscreteFuzzySet, b: &DiscreteFuzzySet, i: &Implication) -> Result<AqipSolution> {
    aqip_fmp_with(dprime, d, b, i, &Tolerance::default())
}

pub fn aqip_fmp_with(
    dprime: &DiscreteFuzzySet,
    d: &DiscreteFuzzySet,
    b: &DiscreteFuzzySet,
    i: &Implication,
    tol: &Tolerance,
) -> Result<AqipSolution> {
    d.same_universe(dprime)?;
    let a = induced_aggregation_unchecked(i, tol);
    let out = b
        .values()
        .iter()
        .map(|&by| {
            d.values()
                .iter()
                .zip(dprime.values())
                .map(|(&dx, &dpx)| a.eval(a.eval(dpx, a.eval(i.eval(dpx, dx), i.eval(dx, by))), 1.0))
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(AqipSolution { conclusion: DiscreteFuzzySet::new(b.universe(), out)?, warnings: hypothesis_warnings(i) })
}

/// FMT conclusion
/// `D'(x) = max_y A_I(A_I(D(x), A_I(I(D(x), B(y)), I(B(y), B'(y)))), 1)`.
pub fn aqip_fmt(bprime: &DiscreteFuzzySet, d: &DiscreteFuzzySet, b: &DiscreteFuzzySet, i: &Implication) -> Result<AqipSolution> {
    aqip_fmt_with(bprime, d, b, i, &Tolerance::default())
}

pub fn aqip_fmt_with(
    bprime: &DiscreteFuzzySet,
    d: &DiscreteFuzzySet,
    b: &DiscreteFuzzySet,
    i: &Implication,
    tol: &Tolerance,
) -> Result<AqipSolution> {
    b.same_universe(bprime)?;
    let a = induced_aggregation_unchecked(i, tol);
    let out = d
        .values()
        .iter()
        .map(|&dx| {
            b.values()
                .iter()
                .zip(bprime.values())
                .map(|(&by, &bpy)| a.eval(a.eval(dx, a.eval(i.eval(dx, by), i.eval(by, bpy))), 1.0))
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(AqipSolution { conclusion: DiscreteFuzzySet::new(d.universe(), out)?, warnings: hypothesis_warnings(i) })
}

/// FMP solution for a left-continuous t-norm `T` and its residual `I`:
/// `B'(y) = max_x T(D'(x), T(I(D'(x), D(x)), I(D(x), B(y))))`.
pub fn qip_tnorm_solution(
    dprime: &DiscreteFuzzySet,
    d: &DiscreteFuzzySet,
    b: &DiscreteFuzzySet,
    t: &Aggregation,
) -> Result<DiscreteFuzzySet> {
    if !t.has_tag(ClassTag::Tnorm) {
        return Err(Error::NotATNorm(t.name().into()));
    }
    if !t.attrs().left_continuous_in_second_arg {
        return Err(Error::NotATNorm(format!("{} is not left-continuous", t.name())));
    }
    d.same_universe(dprime)?;
    let i = residual_implication(t);
    let out = b
        .values()
        .iter()
        .map(|&by| {
            d.values()
                .iter()
                .zip(dprime.values())
                .map(|(&dx, &dpx)| t.eval(dpx, t.eval(i.eval(dpx, dx), i.eval(dx, by))))
                .fold(0.0, f64::max)
        })
        .collect();
    DiscreteFuzzySet::new(b.universe(), out)
}

/// Verdicts of the brute-force optimality oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityReport {
    /// The candidate makes the objective reach its maximum at every `(x, y)`.
    pub maximal: Check,
    /// No grid value below the candidate (by more than one step) also does.
    pub minimal: Check,
    pub grid_step: f64,
}

impl OptimalityReport {
    pub fn holds(&self) -> bool {
        self.maximal.holds && self.minimal.holds
    }
}

const OBJECTIVE_TOL: f64 = 1e-9;

/// Shared oracle. `obj(k, j, c)` is the objective at output point `k` and
/// scanned point `j` when the candidate takes the value `c` at `k`.
fn optimality<F>(n_out: usize, n_scan: usize, candidate: &[f64], grid: &Grid, obj: F) -> OptimalityReport
where
    F: Fn(usize, usize, f64) -> f64,
{
    let step = grid.step();
    let mut maximal = None;
    let mut minimal = None;
    for k in 0..n_out {
        // the objective is nondecreasing in the candidate, so c = 1 gives the maximum
        let best: Vec<f64> = (0..n_scan).map(|j| obj(k, j, 1.0)).collect();
        let reaches = |c: f64| (0..n_scan).all(|j| obj(k, j, c) >= best[j] - OBJECTIVE_TOL);
        if maximal.is_none() && !reaches(candidate[k]) {
            let j = (0..n_scan).find(|&j| obj(k, j, candidate[k]) < best[j] - OBJECTIVE_TOL).expect("some point misses");
            maximal = Some((
                vec![k as f64, j as f64, candidate[k]],
                format!("objective {} below its maximum {}", obj(k, j, candidate[k]), best[j]),
            ));
        }
        if minimal.is_none() {
            let least = grid.points().iter().copied().find(|&c| reaches(c)).unwrap_or(1.0);
            // the true minimum lies in (least - step, least]
            if candidate[k] > least + OBJECTIVE_TOL || candidate[k] <= least - step - OBJECTIVE_TOL {
                minimal = Some((
                    vec![k as f64, candidate[k]],
                    format!("least grid value reaching the maximum is {least}, candidate has {}", candidate[k]),
                ));
            }
        }
    }
    OptimalityReport {
        maximal: Check::from_search("maximal", maximal),
        minimal: Check::from_search(format!("minimal (grid step {step})"), minimal),
        grid_step: step,
    }
}

/// Checks that `candidate` is the FMP solution: it maximizes `M` everywhere
/// and is the least such set up to the resolution of `value_grid`.
/// Witness points are `(y index, x index, value)` and `(y index, value)`.
pub fn verify_qip_optimality(
    dprime: &DiscreteFuzzySet,
    d: &DiscreteFuzzySet,
    b: &DiscreteFuzzySet,
    candidate: &DiscreteFuzzySet,
    i: &Implication,
    value_grid: &Grid,
) -> Result<OptimalityReport> {
    d.same_universe(dprime)?;
    b.same_universe(candidate)?;
    let (dv, dpv, bv) = (d.values(), dprime.values(), b.values());
    Ok(optimality(bv.len(), dv.len(), candidate.values(), value_grid, |k, j, c| {
        objective(i, dpv[j], dv[j], bv[k], c, dv[j])
    }))
}

/// The FMT counterpart of [`verify_qip_optimality`]; the candidate lives on
/// the universe of `D`.
pub fn verify_qip_fmt_optimality(
    bprime: &DiscreteFuzzySet,
    d: &DiscreteFuzzySet,
    b: &DiscreteFuzzySet,
    candidate: &DiscreteFuzzySet,
    i: &Implication,
    value_grid: &Grid,
) -> Result<OptimalityReport> {
    b.same_universe(bprime)?;
    d.same_universe(candidate)?;
    let (dv, bv, bpv) = (d.values(), b.values(), bprime.values());
    Ok(optimality(dv.len(), bv.len(), candidate.values(), value_grid, |k, j, c| {
        fmt_objective(i, dv[k], bv[j], bpv[j], c)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectives::Negation;
    use crate::fuzzy::Universe;

    fn example() -> (DiscreteFuzzySet, DiscreteFuzzySet, DiscreteFuzzySet) {
        let u = Universe::numbered("U", "x", 5).unwrap();
        let v = Universe::numbered("V", "y", 5).unwrap();
        (
            DiscreteFuzzySet::from_pairs(&u, [("x1", 1.0), ("x2", 0.2), ("x3", 0.5)]).unwrap(),
            DiscreteFuzzySet::from_pairs(&v, [("y4", 0.5), ("y5", 1.0)]).unwrap(),
            DiscreteFuzzySet::from_pairs(&u, [("x2", 0.5), ("x3", 1.0), ("x4", 0.2)]).unwrap(),
        )
    }

    #[test]
    fn worked_examples() {
        let (d, b, dp) = example();
        let g = Implication::goguen();
        let s = aqip_fmp(&dp, &d, &b, &g).unwrap();
        assert!(s.warnings.is_empty());
        assert_eq!(s.conclusion.get("y5").unwrap(), 0.5);
        let dc = d.complement(&Negation::standard());
        assert_eq!(aqip_fmp(&dc, &d, &b, &g).unwrap().conclusion.get("y1").unwrap(), 0.0);
        assert!(aqip_fmp(&d, &d, &b, &g).unwrap().conclusion.approx_eq(&b, 1e-12).unwrap());
    }

    #[test]
    fn bisection_path_agrees() {
        let (d, b, dp) = example();
        let g = Implication::goguen().opaque();
        let y5 = aqip_fmp(&dp, &d, &b, &g).unwrap().conclusion.get("y5").unwrap();
        assert!((y5 - 0.5).abs() < 1e-6);
    }

    #[test]
    fn objectives() {
        let (d, b, dp) = example();
        let g = Implication::goguen();
        let ones = DiscreteFuzzySet::universal(b.universe());
        let sol = aqip_fmp(&dp, &d, &b, &g).unwrap().conclusion;
        for x in d.universe().labels() {
            for y in b.universe().labels() {
                assert_eq!(qip_objective_fmp(&dp, &d, &b, &ones, &g, x, y).unwrap().get(), 1.0);
                assert!((qip_objective_fmp(&dp, &d, &b, &sol, &g, x, y).unwrap().get() - 1.0).abs() < 1e-12);
            }
        }
        let zero = DiscreteFuzzySet::empty(b.universe());
        assert_eq!(qip_objective_fmp(&d, &d, &b, &zero, &g, "x1", "y5").unwrap().get(), 0.0);

        let fmt_sol = aqip_fmt(&b, &d, &b, &g).unwrap().conclusion;
        let ones_u = DiscreteFuzzySet::universal(d.universe());
        for x in d.universe().labels() {
            for y in b.universe().labels() {
                assert_eq!(qip_objective_fmt(&d, &b, &b, &ones_u, &g, x, y).unwrap().get(), 1.0);
                assert!((qip_objective_fmt(&d, &b, &b, &fmt_sol, &g, x, y).unwrap().get() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn classical_modus_tollens() {
        // crisp data: D = {x1}, B = {y1}; observing B' = {y1} with x1 => y1 gives D' = {x1}
        let u = Universe::numbered("U", "x", 2).unwrap();
        let v = Universe::numbered("V", "y", 2).unwrap();
        let d = DiscreteFuzzySet::new(&u, vec![1.0, 0.0]).unwrap();
        let b = DiscreteFuzzySet::new(&v, vec![1.0, 0.0]).unwrap();
        let out = aqip_fmt(&b, &d, &b, &Implication::godel()).unwrap().conclusion;
        assert_eq!(out.values(), &[1.0, 0.0]);
        let empty = DiscreteFuzzySet::empty(&v);
        let out = aqip_fmt(&empty, &d, &b, &Implication::godel()).unwrap().conclusion;
        assert_eq!(out.values(), &[0.0, 0.0]);
    }

    #[test]
    fn tnorm_solution() {
        let (d, b, dp) = example();
        let s = qip_tnorm_solution(&dp, &d, &b, &Aggregation::product()).unwrap();
        assert!((s.get("y5").unwrap() - 0.5).abs() < 1e-12);
        let zero = DiscreteFuzzySet::empty(d.universe());
        assert!(qip_tnorm_solution(&zero, &d, &b, &Aggregation::min()).unwrap().values().iter().all(|&v| v == 0.0));
        let g = qip_tnorm_solution(&dp, &d, &b, &Aggregation::min()).unwrap();
        let a = aqip_fmp(&dp, &d, &b, &Implication::godel()).unwrap().conclusion;
        assert!(g.approx_eq(&a, 1e-9).unwrap());
        assert!(matches!(qip_tnorm_solution(&dp, &d, &b, &Aggregation::max()), Err(Error::NotATNorm(_))));
        let drastic = crate::connectives::builtin_aggregation("drastic_tnorm", &[]).unwrap();
        assert!(matches!(qip_tnorm_solution(&dp, &d, &b, &drastic), Err(Error::NotATNorm(_))));
    }

    #[test]
    fn optimality_oracle() {
        let (d, b, dp) = example();
        let g = Implication::goguen();
        let grid = Grid::new(21).unwrap();
        let sol = aqip_fmp(&dp, &d, &b, &g).unwrap().conclusion;
        assert!(verify_qip_optimality(&dp, &d, &b, &sol, &g, &grid).unwrap().holds());

        let ones = DiscreteFuzzySet::universal(b.universe());
        let r = verify_qip_optimality(&dp, &d, &b, &ones, &g, &grid).unwrap();
        assert!(r.maximal.holds && !r.minimal.holds);

        let mut lowered = sol.values().to_vec();
        lowered[4] -= 0.1;
        let lowered = DiscreteFuzzySet::new(b.universe(), lowered).unwrap();
        assert!(!verify_qip_optimality(&dp, &d, &b, &lowered, &g, &grid).unwrap().maximal.holds);

        let fmt_sol = aqip_fmt(&b, &d, &b, &g).unwrap().conclusion;
        assert!(verify_qip_fmt_optimality(&b, &d, &b, &fmt_sol, &g, &grid).unwrap().holds());
    }

    #[test]
    fn warns_outside_hypothesis() {
        let (d, b, dp) = example();
        let kd_like = Implication::custom("one_on_top", |x, y| if x <= y || y > 0.5 { 1.0 } else { 1.0 - x }, Default::default());
        let s = aqip_fmp(&dp, &d, &b, &kd_like).unwrap();
        assert_eq!(s.warnings.len(), 2);
    }
}
