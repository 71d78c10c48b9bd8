//! Approximate reasoning with aggregation functions and fuzzy implications.

pub mod catalog;
pub mod connectives;
pub mod error;
pub mod fuzzy;
pub mod implications;
pub mod inference;
pub mod numerics;
pub mod residuation;
pub mod validity;
pub mod verdict;

pub use error::{Error, Result};
