//! Grid-based classification of binary aggregations.
//!
//! All verdicts are evidence on the sampled grid, not proofs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::aggregation::{Aggregation, AggregationAttrs, ClassTag};
use crate::numerics::Grid;
use crate::verdict::{close, Check};

/// Equality slack for the algebraic checks.
pub const CLASSIFY_TOL: f64 = 1e-9;
/// Slack for the rectangle inequality of two-increasing functions.
pub const TWO_INCREASING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub name: String,
    pub grid_size: usize,
    pub commutative: Check,
    pub associative: Check,
    pub conjunctive: Check,
    pub disjunctive: Check,
    pub averaging: Check,
    pub two_increasing: Check,
    pub left_neutrals: Vec<f64>,
    pub right_neutrals: Vec<f64>,
    pub left_annihilators: Vec<f64>,
    pub right_annihilators: Vec<f64>,
    pub tags: BTreeSet<ClassTag>,
}

impl ClassReport {
    pub fn neutral(&self) -> Option<f64> {
        self.left_neutrals.iter().copied().find(|e| self.right_neutrals.contains(e))
    }

    pub fn annihilator(&self) -> Option<f64> {
        self.left_annihilators.iter().copied().find(|a| self.right_annihilators.contains(a))
    }

    /// Declared attributes that the grid evidence contradicts.
    pub fn contradictions(&self, attrs: &AggregationAttrs) -> Vec<String> {
        let mut out = Vec::new();
        for tag in &attrs.tags {
            if !self.tags.contains(tag) {
                out.push(format!("declared tag `{}` not confirmed", tag.as_str()));
            }
        }
        for s in &attrs.neutral {
            if s.side.covers_left() && !self.left_neutrals.contains(&s.value) {
                out.push(format!("declared left neutral {} not confirmed", s.value));
            }
            if s.side.covers_right() && !self.right_neutrals.contains(&s.value) {
                out.push(format!("declared right neutral {} not confirmed", s.value));
            }
        }
        for s in &attrs.annihilator {
            if s.side.covers_left() && !self.left_annihilators.contains(&s.value) {
                out.push(format!("declared left annihilator {} not confirmed", s.value));
            }
            if s.side.covers_right() && !self.right_annihilators.contains(&s.value) {
                out.push(format!("declared right annihilator {} not confirmed", s.value));
            }
        }
        out
    }
}

/// Classifies `a` on `grid` per the standard aggregation classes.
pub fn classify(a: &Aggregation, grid: &Grid) -> ClassReport {
    let pts = grid.points();
    let n = pts.len();
    let v: Vec<f64> = pts.iter().flat_map(|&x| pts.iter().map(move |&y| a.eval(x, y))).collect();
    let at = |i: usize, j: usize| v[i * n + j];

    let mut commutative = None;
    'comm: for i in 0..n {
        for j in (i + 1)..n {
            if !close(at(i, j), at(j, i), CLASSIFY_TOL) {
                commutative = Some((vec![pts[i], pts[j]], format!("A(x,y) = {} but A(y,x) = {}", at(i, j), at(j, i))));
                break 'comm;
            }
        }
    }

    let mut associative = None;
    'assoc: for i in 0..n {
        for j in 0..n {
            let xy = at(i, j);
            for k in 0..n {
                let lhs = a.eval(pts[i], at(j, k));
                let rhs = a.eval(xy, pts[k]);
                if !close(lhs, rhs, CLASSIFY_TOL) {
                    associative = Some((
                        vec![pts[i], pts[j], pts[k]],
                        format!("A(x,A(y,z)) = {lhs} but A(A(x,y),z) = {rhs}"),
                    ));
                    break 'assoc;
                }
            }
        }
    }

    let cells = || (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    let below_min = |i: usize, j: usize| at(i, j) < pts[i].min(pts[j]) - CLASSIFY_TOL;
    let above_min = |i: usize, j: usize| at(i, j) > pts[i].min(pts[j]) + CLASSIFY_TOL;
    let below_max = |i: usize, j: usize| at(i, j) < pts[i].max(pts[j]) - CLASSIFY_TOL;
    let above_max = |i: usize, j: usize| at(i, j) > pts[i].max(pts[j]) + CLASSIFY_TOL;
    let first = |bad: &dyn Fn(usize, usize) -> bool, what: &str| {
        cells().find(|&(i, j)| bad(i, j)).map(|(i, j)| (vec![pts[i], pts[j]], format!("A = {} {what}", at(i, j))))
    };
    let conjunctive = first(&above_min, "above min");
    let disjunctive = first(&below_max, "below max");
    let averaging = first(&below_min, "below min").or_else(|| first(&above_max, "above max"));

    let mut two_increasing = None;
    'rect: for i1 in 0..n {
        for i2 in (i1 + 1)..n {
            for j1 in 0..n {
                for j2 in (j1 + 1)..n {
                    let vol = at(i1, j1) - at(i1, j2) - at(i2, j1) + at(i2, j2);
                    if vol < -TWO_INCREASING_TOL {
                        two_increasing = Some((
                            vec![pts[i1], pts[j1], pts[i2], pts[j2]],
                            format!("rectangle volume {vol}"),
                        ));
                        break 'rect;
                    }
                }
            }
        }
    }

    let left_neutrals = (0..n).filter(|&e| (0..n).all(|j| close(at(e, j), pts[j], CLASSIFY_TOL))).map(|e| pts[e]).collect();
    let right_neutrals = (0..n).filter(|&e| (0..n).all(|i| close(at(i, e), pts[i], CLASSIFY_TOL))).map(|e| pts[e]).collect();
    let left_annihilators = (0..n).filter(|&z| (0..n).all(|j| close(at(z, j), pts[z], CLASSIFY_TOL))).map(|z| pts[z]).collect();
    let right_annihilators = (0..n).filter(|&z| (0..n).all(|i| close(at(i, z), pts[z], CLASSIFY_TOL))).map(|z| pts[z]).collect();

    let mut report = ClassReport {
        name: a.name().to_string(),
        grid_size: n,
        commutative: Check::from_search("commutative", commutative),
        associative: Check::from_search("associative", associative),
        conjunctive: Check::from_search("conjunctive", conjunctive),
        disjunctive: Check::from_search("disjunctive", disjunctive),
        averaging: Check::from_search("averaging", averaging),
        two_increasing: Check::from_search("two_increasing", two_increasing),
        left_neutrals,
        right_neutrals,
        left_annihilators,
        right_annihilators,
        tags: BTreeSet::new(),
    };
    report.tags = derive_tags(&report);
    report
}

fn derive_tags(r: &ClassReport) -> BTreeSet<ClassTag> {
    let mut tags = BTreeSet::new();
    let both = |l: &[f64], rr: &[f64], e: f64| l.contains(&e) && rr.contains(&e);
    let semicopula = both(&r.left_neutrals, &r.right_neutrals, 1.0);
    let dual_semicopula = both(&r.left_neutrals, &r.right_neutrals, 0.0);
    let ca = r.commutative.holds && r.associative.holds;
    let pairs = [
        (ClassTag::Commutative, r.commutative.holds),
        (ClassTag::Associative, r.associative.holds),
        (ClassTag::Conjunctive, r.conjunctive.holds),
        (ClassTag::Disjunctive, r.disjunctive.holds),
        (ClassTag::Averaging, r.averaging.holds),
        (ClassTag::Semicopula, semicopula),
        (ClassTag::Tnorm, ca && semicopula),
        (ClassTag::Tconorm, ca && dual_semicopula),
        (ClassTag::Copula, semicopula && r.two_increasing.holds),
    ];
    for (tag, holds) in pairs {
        if holds {
            tags.insert(tag);
        }
    }
    tags
}

/// Result of scanning for jumps in the second argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub declared: bool,
    pub jump_found: bool,
    /// `(x, z, jump)` at the first jump found.
    pub witness: Option<(f64, f64, f64)>,
}

impl ContinuityReport {
    /// The declaration says continuous but a jump was observed.
    pub fn contradicts_declaration(&self) -> bool {
        self.declared && self.jump_found
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Approach {
    FromBelow,
    FromAbove,
}

/// Looks for `|f(x, z) - f(x, z ∓ h)| > jump_tol` at each grid pair while `h`
/// shrinks from the grid step to 1e-12. A jump must persist at the
/// smallest `h` to count.
pub(crate) fn scan_jumps(
    f: &dyn Fn(f64, f64) -> f64,
    grid: &Grid,
    jump_tol: f64,
    approach: Approach,
) -> Option<(f64, f64, f64)> {
    let pts = grid.points();
    let mut hs = Vec::new();
    let mut h = grid.step();
    while h >= 1e-12 {
        hs.push(h);
        h /= 10.0;
    }
    for &x in pts {
        for &z in pts {
            let neighbour = |h: f64| match approach {
                Approach::FromBelow => z - h,
                Approach::FromAbove => z + h,
            };
            if !(0.0..=1.0).contains(&neighbour(hs[0])) {
                continue;
            }
            let at_z = f(x, z);
            let persistent = hs.iter().all(|&h| (at_z - f(x, neighbour(h))).abs() > jump_tol);
            if persistent {
                let last = *hs.last().unwrap();
                return Some((x, z, (at_z - f(x, neighbour(last))).abs()));
            }
        }
    }
    None
}

/// Heuristic left-continuity scan in the second argument.
pub fn check_left_continuity_second_arg(a: &Aggregation, grid: &Grid, jump_tol: f64) -> ContinuityReport {
    let witness = scan_jumps(&|x, z| a.eval(x, z), grid, jump_tol, Approach::FromBelow);
    ContinuityReport { declared: a.attrs().left_continuous_in_second_arg, jump_found: witness.is_some(), witness }
}

/// Heuristic right-continuity scan in the second argument.
pub fn check_right_continuity_second_arg(a: &Aggregation, grid: &Grid, jump_tol: f64) -> ContinuityReport {
    let witness = scan_jumps(&|x, z| a.eval(x, z), grid, jump_tol, Approach::FromAbove);
    ContinuityReport { declared: a.attrs().right_continuous_in_second_arg, jump_found: witness.is_some(), witness }
}
