//! Extended-range log-domain arithmetic.
//!
//! Everything downstream carries magnitudes as (possibly enormous) reals,
//! typically natural logarithms of positive quantities. The carrier type
//! [`XReal`] pairs a configurable-precision mantissa with an
//! arbitrary-precision power-of-two exponent, so schedules whose
//! log-magnitudes themselves have thousands of digits stay representable.
//! [`XInterval`] wraps pairs of bounds with outward rounding; every interval
//! operation encloses the exact real result.

pub mod bigfix;
pub mod consts;
pub mod convert;
mod interval;
pub mod kernels;
mod real;

pub use interval::{log_abs_one_minus, XBound, XInterval};
pub use real::{
    default_precision, set_default_precision, ExpOutcome, Round, XReal, DEFAULT_EXP_BUDGET_BITS,
};

/// Errors from extended-range arithmetic.
#[derive(Debug, thiserror::Error)]
pub enum XError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_abs_one_minus_branches() {
        // |w| = 4: [ln 3, ln 5]
        let l = XReal::from_f64(4.0, 53).unwrap().ln_rm(53, Round::Nearest).unwrap();
        let iv = log_abs_one_minus(&XInterval::point(l), None);
        assert!((iv.lo_real().unwrap().to_f64() - 3f64.ln()).abs() < 1e-13);
        assert!((iv.hi_real().unwrap().to_f64() - 5f64.ln()).abs() < 1e-13);

        // |w| = 1/4: [ln(3/4), ln(5/4)]
        let l = XReal::from_f64(0.25, 53).unwrap().ln_rm(53, Round::Nearest).unwrap();
        let iv = log_abs_one_minus(&XInterval::point(l), None);
        assert!((iv.lo_real().unwrap().to_f64() - 0.75f64.ln()).abs() < 1e-13);
        assert!((iv.hi_real().unwrap().to_f64() - 1.25f64.ln()).abs() < 1e-13);

        // |w| = 1, no exclusion: [-inf, ln 2]
        let iv = log_abs_one_minus(&XInterval::point(XReal::zero()), None);
        assert_eq!(iv.lo(), &XBound::NegInf);
        assert!((iv.hi_real().unwrap().to_f64() - 2f64.ln()).abs() < 1e-13);

        // Same with an exclusion |1 - w| >= 1/2: lower bound ln(1/2).
        let half = XReal::from_f64(0.5, 53).unwrap();
        let iv = log_abs_one_minus(&XInterval::point(XReal::zero()), Some(&half));
        assert!((iv.lo_real().unwrap().to_f64() + 2f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn log_abs_one_minus_monotone() {
        // Containment monotonicity in the interval order.
        let f = |a: f64, b: f64| {
            let la = XReal::from_f64(a, 53).unwrap();
            let lb = XReal::from_f64(b, 53).unwrap();
            log_abs_one_minus(&XInterval::finite(la, lb), None)
        };
        let narrow = f(1.0, 2.0);
        let wide = f(0.9, 2.5);
        assert!(wide.contains_interval(&narrow));
    }

    #[test]
    fn branch_boundary_two_ulps() {
        // At |w| = 2 exactly the |w| >= 2 branch lower bound must agree with
        // ln(|w| - 1) = 0 to within 2 ulps.
        let l = consts::ln2(53, Round::Floor);
        let iv = log_abs_one_minus(&XInterval::point(l), None);
        let lo = iv.lo_real().unwrap();
        // ln(2 - 1) = 0; allow 2 ulps at the magnitude of ln 2.
        let tol = consts::ln2(53, Round::Nearest).ulp().mul_pow2(1);
        assert!(lo.abs() <= tol.mul_pow2(53), "lo = {lo}");
        // and at |w| = 1/2: lower = ln(1/2) within 2 ulps.
        let lh = consts::ln2(53, Round::Floor).neg();
        let iv2 = log_abs_one_minus(&XInterval::point(lh), None);
        let lo2 = iv2.lo_real().unwrap();
        let target = consts::ln2(53, Round::Nearest).neg();
        let diff = lo2.sub_rm(&target, 53, Round::Nearest).abs();
        assert!(diff <= target.ulp().mul_pow2(2), "diff = {diff}");
    }
}
