//! Monotone-predicate search on the unit interval and grid sampling.
//!
//! Suprema of down-sets and infima of up-sets of `[0, 1]` are located by
//! bisection. The empty-set conventions are `sup ∅ = 0` and `inf ∅ = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Width of the band in which order comparisons at a discontinuity treat
/// two values as equal. Guards closed forms against rounding in their inputs.
pub const SNAP: f64 = 1e-12;

/// A real number in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct UnitValue(f64);

impl UnitValue {
    pub const ZERO: UnitValue = UnitValue(0.0);
    pub const ONE: UnitValue = UnitValue(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(UnitValue(value))
        } else {
            Err(Error::OutOfRange { value })
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for UnitValue {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        UnitValue::new(value)
    }
}

impl From<UnitValue> for f64 {
    fn from(value: UnitValue) -> f64 {
        value.0
    }
}

/// Bisection stopping rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    eps: f64,
    max_iter: u32,
}

impl Tolerance {
    pub fn new(eps: f64, max_iter: u32) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidTolerance(format!("eps must be positive, got {eps}")));
        }
        if max_iter == 0 {
            return Err(Error::InvalidTolerance("max_iter must be at least 1".into()));
        }
        Ok(Tolerance { eps, max_iter })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn max_iter(&self) -> u32 {
        self.max_iter
    }

    /// Whether `max_iter` halvings are enough to shrink `[0, 1]` below `eps`.
    pub fn converges(&self) -> bool {
        (-(self.max_iter as f64)).exp2() < self.eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: 1e-9, max_iter: 80 }
    }
}

/// Uniform sampling grid `k / (n - 1)` for `k = 0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(n));
        }
        let last = (n - 1) as f64;
        let points = (0..n).map(|k| k as f64 / last).collect();
        Ok(Grid { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.points.len() - 1) as f64
    }
}

/// Shorthand for [`Grid::new`].
pub fn grid_points(n: usize) -> Result<Grid> {
    Grid::new(n)
}

/// Random source for trial `trial` of a run seeded with `seed`. Each trial
/// has its own stream, so a single failing trial can be replayed alone.
pub fn trial_rng(seed: u64, trial: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Supremum of a down-set `{t : pred(t)}` of `[0, 1]`.
///
/// Returns a point satisfying `pred` within `tol.eps` of the supremum, `1`
/// when `pred(1)` holds and `0` when the set is empty. A predicate that holds
/// at 1 but not at 0 cannot have a down-set as its true-set and is rejected.
pub fn sup_satisfying<P>(mut pred: P, tol: &Tolerance) -> Result<UnitValue>
where
    P: FnMut(f64) -> bool,
{
    let at_zero = pred(0.0);
    let at_one = pred(1.0);
    if at_one && !at_zero {
        return Err(Error::MonotonicityViolation(
            "predicate holds at 1 but not at 0; expected a down-set".into(),
        ));
    }
    Ok(UnitValue(sup_from_endpoints(&mut pred, at_zero, at_one, tol)))
}

/// Infimum of an up-set `{t : pred(t)}` of `[0, 1]`.
///
/// Returns a point satisfying `pred` within `tol.eps` of the infimum, `0`
/// when `pred(0)` holds and `1` when the set is empty.
pub fn inf_satisfying<P>(mut pred: P, tol: &Tolerance) -> Result<UnitValue>
where
    P: FnMut(f64) -> bool,
{
    let at_zero = pred(0.0);
    let at_one = pred(1.0);
    if at_zero && !at_one {
        return Err(Error::MonotonicityViolation(
            "predicate holds at 0 but not at 1; expected an up-set".into(),
        ));
    }
    Ok(UnitValue(inf_from_endpoints(&mut pred, at_zero, at_one, tol)))
}

/// Unchecked variant of [`sup_satisfying`] used inside pointwise closures,
/// where the predicate comes from a descriptor that already passed its
/// monotonicity checks.
pub(crate) fn sup_unchecked<P: FnMut(f64) -> bool>(mut pred: P, tol: &Tolerance) -> f64 {
    let at_one = pred(1.0);
    let at_zero = at_one || pred(0.0);
    sup_from_endpoints(&mut pred, at_zero, at_one, tol)
}

pub(crate) fn inf_unchecked<P: FnMut(f64) -> bool>(mut pred: P, tol: &Tolerance) -> f64 {
    let at_zero = pred(0.0);
    let at_one = at_zero || pred(1.0);
    inf_from_endpoints(&mut pred, at_zero, at_one, tol)
}

fn sup_from_endpoints<P: FnMut(f64) -> bool>(pred: &mut P, at_zero: bool, at_one: bool, tol: &Tolerance) -> f64 {
    if at_one {
        return 1.0;
    }
    if !at_zero {
        return 0.0;
    }
    // invariant: pred(lo) && !pred(hi)
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut iter = 0;
    while hi - lo > tol.eps && iter < tol.max_iter {
        let mid = lo + 0.5 * (hi - lo);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        iter += 1;
    }
    lo
}

fn inf_from_endpoints<P: FnMut(f64) -> bool>(pred: &mut P, at_zero: bool, at_one: bool, tol: &Tolerance) -> f64 {
    if at_zero {
        return 0.0;
    }
    if !at_one {
        return 1.0;
    }
    // invariant: !pred(lo) && pred(hi)
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut iter = 0;
    while hi - lo > tol.eps && iter < tol.max_iter {
        let mid = lo + 0.5 * (hi - lo);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iter += 1;
    }
    hi
}
