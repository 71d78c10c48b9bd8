//! Inference schemes: compositional (ACRI), similarity-based (ASBR) and
//! quintuple-implication (AQIP).

mod acri;
mod aqip;
mod asbr;
mod relation;

pub use acri::{acri_fmp, acri_fmt, fati, fita, Arrow, MisoRule, RuleBase};
pub use aqip::{
    aqip_fmp, aqip_fmp_with, aqip_fmt, aqip_fmt_with, qip_objective_fmp, qip_objective_fmt, qip_tnorm_solution,
    verify_qip_fmt_optimality, verify_qip_optimality, AqipSolution, OptimalityReport,
};
pub use asbr::{asbr_conclude, check_gmp2_prime, asbr_with_similarity, modified_relation_r1, modified_relation_r2};
pub use relation::{sup_a_compose, FuzzyRelation};
