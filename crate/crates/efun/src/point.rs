//! Pointwise log-polar evaluation of positive-zero products with argument
//! tracking at moderate scales.

use crate::spec::ProductSpec;
use crate::EfunError;
use xlog::{Round, XInterval, XReal};

/// Result of a pointwise evaluation.
#[derive(Clone, Debug)]
pub struct PointEval {
    pub log_modulus: XInterval,
    /// Argument of f(z) (radians, unreduced) with an accumulated error bound;
    /// None when the phase error budget was exceeded and the result was
    /// downgraded to modulus-only.
    pub arg: Option<(f64, f64)>,
}

/// Factors whose log magnitude ratio exceeds this are handled
/// asymptotically; below it ordinary double-range complex arithmetic cannot
/// overflow.
const ASYMPTOTIC_CUTOFF: f64 = 700.0;

/// Evaluate f at z given by (log|z|, arg z). Arguments are tracked in f64
/// with explicit error accumulation; the modulus enclosure is widened by the
/// float slack of each factor.
pub fn point_eval(
    spec: &ProductSpec,
    log_z: &XReal,
    theta: f64,
    phase_err_budget: f64,
) -> Result<PointEval, EfunError> {
    if let Some(t) = &spec.tail {
        if log_z > &t.log_cutoff {
            return Err(EfunError::TruncationExceeded);
        }
    }
    let prec = log_z.precision();
    let mut log_mod = XInterval::point(log_z.clone())
        .scale_int(&num_bigint::BigInt::from(spec.power_at_zero));
    let mut phase = spec.power_at_zero as f64 * theta;
    let mut phase_err: f64 = 1e-16 * spec.power_at_zero as f64;

    for z in &spec.zeros {
        let l_lo = log_z.sub_rm(&z.log_modulus, prec, Round::Floor);
        let l_hi = log_z.sub_rm(&z.log_modulus, prec, Round::Ceil);
        let l64 = l_lo.to_f64();
        let mult = z.multiplicity as f64;
        if l64 > ASYMPTOTIC_CUTOFF {
            // 1 - w ~ -w: modulus correction in [log(1-1/|w|), log(1+1/|w|)],
            // phase error at most 2/|w|.
            let corr = xlog::log_abs_one_minus(&XInterval::finite(l_lo, l_hi), None);
            log_mod = log_mod.add(&corr.scale_int(&num_bigint::BigInt::from(z.multiplicity)));
            phase += mult * (theta + std::f64::consts::PI);
            phase_err += mult * 2.0 * (-l64).exp();
        } else if l64 < -ASYMPTOTIC_CUTOFF {
            // 1 - w ~ 1: corrections bounded by 2|w|.
            let corr = xlog::log_abs_one_minus(&XInterval::finite(l_lo, l_hi), None);
            log_mod = log_mod.add(&corr.scale_int(&num_bigint::BigInt::from(z.multiplicity)));
            phase_err += mult * 2.0 * l64.exp();
        } else {
            // Ordinary complex arithmetic.
            let w_abs = l64.exp();
            let (s, c) = theta.sin_cos();
            let re = 1.0 - w_abs * c;
            let im = -w_abs * s;
            let v = (re * re + im * im).sqrt();
            if v == 0.0 {
                return Ok(PointEval {
                    log_modulus: XInterval::new(
                        xlog::XBound::NegInf,
                        log_mod.hi().clone(),
                    ),
                    arg: None,
                });
            }
            // Relative float slack: a few eps, amplified near cancellation.
            let slack = 3e-15 * (1.0 + w_abs / v);
            let lv = v.ln();
            let lo = XReal::from_f64(lv - slack - 1e-300, prec).unwrap();
            let hi = XReal::from_f64(lv + slack + 1e-300, prec).unwrap();
            let corr = XInterval::finite(lo, hi)
                .scale_int(&num_bigint::BigInt::from(z.multiplicity));
            log_mod = log_mod.add(&corr);
            phase += mult * im.atan2(re);
            phase_err += mult * slack;
        }
    }
    // Tail factors: moduli correction within the tail bound, phase within
    // 2 sum |w| over dropped zeros.
    if let Some(t) = &spec.tail {
        let l = log_z.sub_rm(&t.first_dropped_log, prec, Round::Ceil);
        let (ratio, _) = XInterval::point(l).exp(1 << 16);
        let rh = ratio.hi_real().unwrap().clone();
        let up = rh.mul_pow2(1);
        log_mod = log_mod.add(&XInterval::finite(up.mul_pow2(1).neg(), up.clone()));
        phase_err += 4.0 * rh.to_f64();
    }
    let arg = if phase_err <= phase_err_budget {
        Some((phase, phase_err))
    } else {
        None
    };
    Ok(PointEval { log_modulus: log_mod, arg })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::ZeroTerm;

    fn ln_x(v: f64) -> XReal {
        XReal::from_f64(v, 53).unwrap().ln_rm(53, Round::Nearest).unwrap()
    }

    #[test]
    fn monomial_point() {
        // spec = z^2 at (log r, theta): (2 log r, 2 theta)
        let spec = ProductSpec::polynomial(2, vec![]);
        let pe = point_eval(&spec, &ln_x(7.0), 0.5, 1e-6).unwrap();
        assert!((pe.log_modulus.midpoint().unwrap().to_f64() - 2.0 * 7f64.ln()).abs() < 1e-12);
        let (a, e) = pe.arg.unwrap();
        assert!((a - 1.0).abs() <= e + 1e-12);
    }

    #[test]
    fn factor_at_minus_ten() {
        // spec = 1 - z/10 at z = -10: f = 2, arg 0.
        let spec = ProductSpec::polynomial(
            0,
            vec![ZeroTerm { log_modulus: ln_x(10.0), multiplicity: 1 }],
        );
        let pe = point_eval(&spec, &ln_x(10.0), std::f64::consts::PI, 1e-6).unwrap();
        assert!((pe.log_modulus.midpoint().unwrap().to_f64() - 2f64.ln()).abs() < 1e-9);
        let (a, e) = pe.arg.unwrap();
        // arg should be ~0 (mod 2 pi)
        let red = a.rem_euclid(2.0 * std::f64::consts::PI);
        let dist = red.min(2.0 * std::f64::consts::PI - red);
        assert!(dist <= e + 1e-9, "arg {a} err {e}");
    }

    #[test]
    fn downgrade_near_zero_of_factor() {
        // z on the circle through the zero, pointing at it: 1 - w vanishes.
        let spec = ProductSpec::polynomial(
            0,
            vec![ZeroTerm { log_modulus: ln_x(10.0), multiplicity: 1 }],
        );
        let pe = point_eval(&spec, &ln_x(10.0), 0.0, 1e-6).unwrap();
        assert!(pe.arg.is_none(), "phase must be downgraded at a zero");
    }
}
