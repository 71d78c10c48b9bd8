//! Negations and binary aggregation functions.

mod aggregation;
mod classify;
mod negation;

pub use aggregation::{
    builtin_aggregation, check_aggregation_axioms, Aggregation, AggregationAttrs, AxiomReport, BuiltinAggregation,
    ClassTag, Side, Sided,
};
pub(crate) use aggregation::{monotonicity_witness, BinaryFn};
pub use classify::{
    check_left_continuity_second_arg, check_right_continuity_second_arg, classify, ClassReport, ContinuityReport,
    CLASSIFY_TOL, TWO_INCREASING_TOL,
};
pub(crate) use classify::{scan_jumps, Approach};
pub use negation::Negation;
