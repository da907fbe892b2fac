//! Recursive parameter schedules for the three constructions, with
//! generation-time invariant checks, hypothesis verdicts, truncated-product
//! builders, and CSV export.

pub mod example1;
pub mod example2;
pub mod example3;

pub use example1::{example1_from_decimal, generate_example1, Example1Schedule};
pub use example2::{example2_from_decimal, generate_example2, Example2Schedule};
pub use example3::{generate_example3, parse_s1_log, Ex3Row, Example3Schedule, SCHEDULE_BUDGET_BITS};

#[derive(Debug, thiserror::Error)]
pub enum SchedError {
    #[error("bad base parameter: {0}")]
    BadParameter(String),
    #[error("invariant violated at index {index}: {what}")]
    InvariantViolation { index: u32, what: String },
    #[error("schedule too short to certify the truncation tail; raise n_max")]
    ScheduleTooShort,
    #[error("domain error: {0}")]
    Domain(String),
}
