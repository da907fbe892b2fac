//! Structured entire functions and rigorous modulus evaluation.
//!
//! The products here have only positive real zeros, which makes the circle
//! maximum and minimum modulus exactly computable: every factor |1 - z/a| is
//! maximized on |z| = r at z = -r and minimized at z = +r simultaneously.
//! Everything else (enclosures over regions, Jensen means, zero counts,
//! pointwise log-polar evaluation) builds on that plus outward-rounded
//! extended-range arithmetic.

mod modulus;
mod point;
pub mod serial;
mod spec;

pub use modulus::{
    exact_max_min_modulus, jensen_mean, log1p_exp_iv, log_abs_one_minus_exp_real_iv,
    log_dominated_lower, log_sum_upper, modulus_interval, poly_log_max, zero_count_below,
    CircleBounds, ModulusBounds, Region,
};
pub use point::{point_eval, PointEval};
pub use spec::{FunctionSpec, MixedSumSpec, MixedTerm, ProductSpec, TailInfo, ZeroTerm};

/// Errors from spec construction and evaluation.
#[derive(Debug, thiserror::Error)]
pub enum EfunError {
    #[error("evaluation radius beyond the truncation cutoff")]
    TruncationExceeded,
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    XError(#[from] xlog::XError),
}
