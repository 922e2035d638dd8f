//! Verification lab: each check runs a family of test functions through the seminorm engine
//! and records every number its verdict depends on.

pub mod classical;
pub mod common;
pub mod exact;
pub mod families;
pub mod interpolation;
pub mod lower_order;
pub mod main_estimate;
pub mod model;
pub mod registry;
pub mod small_time;
pub mod trace_ext;

pub use model::{
    Assertion, CheckCase, Expectation, Member, MemberReport, MemberSource, Relation, TermRecord, Verdict,
    VerificationReport, SCHEMA_VERSION,
};
pub use registry::{default_case, list_cases, run_check, run_check_timed, CaseInfo};
