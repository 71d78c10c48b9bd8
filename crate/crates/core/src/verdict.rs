//! Pass/fail records shared by the property checkers.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A concrete point at which a property fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Arguments at which the property was evaluated.
    pub point: Vec<f64>,
    pub detail: String,
}

/// Outcome of a single numeric property check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub property: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    pub fn pass(property: impl Into<String>) -> Self {
        Check { property: property.into(), holds: true, witness: None }
    }

    pub fn fail(property: impl Into<String>, point: Vec<f64>, detail: impl Into<String>) -> Self {
        Check {
            property: property.into(),
            holds: false,
            witness: Some(Witness { point, detail: detail.into() }),
        }
    }

    /// Passes unless `witness` is `Some`.
    pub fn from_search(property: impl Into<String>, witness: Option<(Vec<f64>, String)>) -> Self {
        match witness {
            None => Check::pass(property),
            Some((point, detail)) => Check::fail(property, point, detail),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.holds { "pass" } else { "FAIL" };
        write!(f, "{:<24} {mark}", self.property)?;
        if let Some(w) = &self.witness {
            let pts: Vec<String> = w.point.iter().map(|v| format!("{v}")).collect();
            write!(f, "  at ({}): {}", pts.join(", "), w.detail)?;
        }
        Ok(())
    }
}

/// Absolute-difference comparison used throughout the checkers.
#[inline]
pub(crate) fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
