use serde::{Deserialize, Serialize};

use super::{Implication, ImplicationAttrs};
use crate::connectives::{monotonicity_witness, scan_jumps, Approach, ContinuityReport, Negation};
use crate::numerics::Grid;
use crate::verdict::{close, Check};

/// Base equality slack; bisection-based implications add their own error.
pub const PROPERTY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImplicationReport {
    pub name: String,
    pub grid_size: usize,
    pub i1: Check,
    pub i2: Check,
    pub i3: Check,
    pub i4: Check,
    pub i5: Check,
    pub lb: Check,
    pub rb: Check,
    pub np: Check,
    pub ip: Check,
    pub ep: Check,
    pub op: Check,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cp: Option<Check>,
    /// `y ↦ I(1, y)` strictly increasing on the grid.
    pub strictly_increasing_section: Check,
}

impl ImplicationReport {
    pub fn is_implication(&self) -> bool {
        [&self.i1, &self.i2, &self.i3, &self.i4, &self.i5].iter().all(|c| c.holds)
    }

    pub fn checks(&self) -> Vec<&Check> {
        let mut v = vec![
            &self.i1, &self.i2, &self.i3, &self.i4, &self.i5, &self.lb, &self.rb, &self.np, &self.ip, &self.ep, &self.op,
        ];
        if let Some(cp) = &self.cp {
            v.push(cp);
        }
        v.push(&self.strictly_increasing_section);
        v
    }

    /// Declared optional laws that disagree with the grid verdicts.
    pub fn contradictions(&self, attrs: &ImplicationAttrs) -> Vec<String> {
        let mut out = Vec::new();
        let pairs = [("NP", attrs.np, &self.np), ("IP", attrs.ip, &self.ip), ("EP", attrs.ep, &self.ep), ("OP", attrs.op, &self.op)];
        for (label, declared, check) in pairs {
            if let Some(d) = declared {
                if d != check.holds {
                    out.push(format!("{label} declared {d} but grid says {}", check.holds));
                }
            }
        }
        if let (Some(d), Some(cp)) = (attrs.cp, &self.cp) {
            if d != cp.holds {
                out.push(format!("CP declared {d} but grid says {}", cp.holds));
            }
        }
        out
    }
}

fn first<I: Iterator<Item = (Vec<f64>, String)>>(mut it: I) -> Option<(Vec<f64>, String)> {
    it.next()
}

/// Grid verdicts for (I1)–(I5), (LB), (RB), (NP), (IP), (EP), (OP), and
/// (CP(N)) when a negation is given.
pub fn check_implication_properties(i: &Implication, n: Option<&Negation>, grid: &Grid) -> ImplicationReport {
    let tol = PROPERTY_TOL + 2.0 * i.value_error();
    let pts = grid.points();
    let f = |x: f64, y: f64| i.eval(x, y);
    let pairs = || pts.iter().flat_map(|&x| pts.iter().map(move |&y| (x, y)));

    let mono_first = monotonicity_witness(&|x, y| f(x, y), grid, -1, 0, tol);
    let mono_second = monotonicity_witness(&|x, y| f(x, y), grid, 0, 1, tol);
    let corner = |label: &str, x: f64, y: f64, want: f64| {
        let v = f(x, y);
        if close(v, want, tol) {
            Check::pass(label)
        } else {
            Check::fail(label, vec![x, y], format!("I = {v}, expected {want}"))
        }
    };

    let lb = first(pts.iter().filter(|&&y| !close(f(0.0, y), 1.0, tol)).map(|&y| (vec![0.0, y], format!("I(0,y) = {}", f(0.0, y)))));
    let rb = first(pts.iter().filter(|&&x| !close(f(x, 1.0), 1.0, tol)).map(|&x| (vec![x, 1.0], format!("I(x,1) = {}", f(x, 1.0)))));
    let np = first(pts.iter().filter(|&&y| !close(f(1.0, y), y, tol)).map(|&y| (vec![1.0, y], format!("I(1,y) = {}", f(1.0, y)))));
    let ip = first(pts.iter().filter(|&&x| !close(f(x, x), 1.0, tol)).map(|&x| (vec![x, x], format!("I(x,x) = {}", f(x, x)))));
    let op = first(pairs().filter_map(|(x, y)| {
        let is_one = close(f(x, y), 1.0, tol);
        (is_one != (x <= y)).then(|| (vec![x, y], format!("I = {} with x {} y", f(x, y), if x <= y { "<=" } else { ">" })))
    }));
    let mut ep = None;
    'ep: for &x in pts {
        for &y in pts {
            for &z in pts {
                let lhs = f(x, f(y, z));
                let rhs = f(y, f(x, z));
                if !close(lhs, rhs, 2.0 * tol) {
                    ep = Some((vec![x, y, z], format!("I(x,I(y,z)) = {lhs} but I(y,I(x,z)) = {rhs}")));
                    break 'ep;
                }
            }
        }
    }
    let cp = n.map(|n| {
        let w = first(pairs().filter_map(|(x, y)| {
            let (a, b) = (f(x, y), f(n.eval(y), n.eval(x)));
            (!close(a, b, tol)).then(|| (vec![x, y], format!("I(x,y) = {a} but I(N(y),N(x)) = {b}")))
        }));
        Check::from_search(format!("CP({})", n.name()), w)
    });
    let section = first(pts.windows(2).filter(|w| f(1.0, w[1]) <= f(1.0, w[0])).map(|w| {
        (vec![w[0], w[1]], format!("I(1,{}) = {} not below I(1,{}) = {}", w[0], f(1.0, w[0]), w[1], f(1.0, w[1])))
    }));

    ImplicationReport {
        name: i.name().into(),
        grid_size: pts.len(),
        i1: Check::from_search("I1", mono_first),
        i2: Check::from_search("I2", mono_second),
        i3: corner("I3", 0.0, 0.0, 1.0),
        i4: corner("I4", 1.0, 1.0, 1.0),
        i5: corner("I5", 1.0, 0.0, 0.0),
        lb: Check::from_search("LB", lb),
        rb: Check::from_search("RB", rb),
        np: Check::from_search("NP", np),
        ip: Check::from_search("IP", ip),
        ep: Check::from_search("EP", ep),
        op: Check::from_search("OP", op),
        cp,
        strictly_increasing_section: Check::from_search("strict I(1,.)", section),
    }
}

/// `I1 ≤ I2 + 1e-9` at every grid pair.
pub fn pointwise_leq(i1: &Implication, i2: &Implication, grid: &Grid) -> Check {
    let pts = grid.points();
    let w = pts.iter().flat_map(|&x| pts.iter().map(move |&y| (x, y))).find_map(|(x, y)| {
        let (a, b) = (i1.eval(x, y), i2.eval(x, y));
        (a > b + 1e-9).then(|| (vec![x, y], format!("{}(x,y) = {a} > {}(x,y) = {b}", i1.name(), i2.name())))
    });
    Check::from_search(format!("{} <= {}", i1.name(), i2.name()), w)
}

/// Heuristic right-continuity scan of `I` in its second argument.
pub fn check_implication_right_continuity(i: &Implication, grid: &Grid, jump_tol: f64) -> ContinuityReport {
    let witness = scan_jumps(&|x, y| i.eval(x, y), grid, jump_tol, Approach::FromAbove);
    ContinuityReport { declared: i.is_right_continuous(), jump_found: witness.is_some(), witness }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::implications::{builtin_implication, BuiltinImplication, Implication};

    fn g(n: usize) -> Grid {
        Grid::new(n).unwrap()
    }

    #[test]
    fn goguen_laws() {
        let r = check_implication_properties(&Implication::goguen(), Some(&Negation::standard()), &g(101));
        assert!(r.is_implication());
        assert!(r.np.holds && r.ip.holds && r.op.holds && r.ep.holds);
        assert!(r.strictly_increasing_section.holds);
        assert!(!r.cp.unwrap().holds);
    }

    #[test]
    fn kleene_dienes_fails_ip() {
        let r = check_implication_properties(&Implication::kleene_dienes(), None, &g(101));
        assert!(!r.ip.holds);
        let w = r.ip.witness.unwrap();
        let x = w.point[0];
        assert!((Implication::kleene_dienes().eval(x, x) - 1.0).abs() > 1e-9);
    }

    #[test]
    fn reichenbach_contrapositive() {
        let r = check_implication_properties(&Implication::reichenbach(), Some(&Negation::standard()), &g(101));
        assert!(r.cp.unwrap().holds);
    }

    #[test]
    fn declared_attrs_match_grid() {
        let n = Negation::standard();
        for b in BuiltinImplication::ALL {
            let i = Implication::from_builtin(b);
            let r = check_implication_properties(&i, Some(&n), &g(51));
            assert!(r.is_implication(), "{}", b.name());
            assert!(r.contradictions(i.attrs()).is_empty(), "{}: {:?}", b.name(), r.contradictions(i.attrs()));
        }
    }

    #[test]
    fn pointwise_order_examples() {
        let grid = g(101);
        let rg = builtin_implication("rescher_gaines").unwrap();
        assert!(pointwise_leq(&rg, &Implication::goguen(), &grid).holds);
        assert!(!pointwise_leq(&Implication::goguen(), &Implication::godel(), &grid).holds);
        assert!(pointwise_leq(&Implication::godel(), &Implication::goguen(), &grid).holds);
        let c = pointwise_leq(&Implication::lukasiewicz(), &Implication::goguen(), &grid);
        assert!(!c.holds);
        let luk = Implication::lukasiewicz();
        let (x, y) = (0.8, 0.4);
        assert!(luk.eval(x, y) > Implication::goguen().eval(x, y));
    }

    #[test]
    fn right_continuity_scan() {
        let grid = g(101);
        for b in BuiltinImplication::ALL {
            let r = check_implication_right_continuity(&Implication::from_builtin(b), &grid, 1e-6);
            assert!(!r.jump_found, "{}: {:?}", b.name(), r.witness);
        }
        // Goedel jumps from y up to 1 when y reaches x from below
        let left = Implication::custom("lower_godel", |x, y| if x < y { 1.0 } else { y }, Default::default());
        assert!(check_implication_right_continuity(&left, &grid, 1e-6).jump_found);
    }
}
