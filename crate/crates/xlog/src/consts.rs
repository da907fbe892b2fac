//! Mathematical constants as extended-range reals with directed rounding.

use crate::bigfix;
use crate::real::{Round, XReal};
use num_bigint::BigInt;

fn from_kernel(v: BigInt, scale: u64, prec: u32, mode: Round) -> XReal {
    XReal::from_fix(&v, scale, &BigInt::from(bigfix::KERNEL_ERR_ULPS), prec, mode)
}

pub fn ln2(prec: u32, mode: Round) -> XReal {
    let s = prec as u64 + 64;
    from_kernel(bigfix::ln2(s), s, prec, mode)
}

pub fn ln10(prec: u32, mode: Round) -> XReal {
    let s = prec as u64 + 64;
    from_kernel(bigfix::ln10(s), s, prec, mode)
}

pub fn pi(prec: u32, mode: Round) -> XReal {
    let s = prec as u64 + 64;
    from_kernel(bigfix::pi(s), s, prec, mode)
}

/// Lower bound constant for the hyperbolic density of the twice-punctured
/// plane: C0 = Gamma(1/4)^4 / (4 pi^2) = 2 pi / AGM(1, sqrt 2)^2.
pub fn punctured_plane_c0(prec: u32, mode: Round) -> XReal {
    let s = prec as u64 + 96;
    let one = BigInt::from(1) << s as usize;
    let sqrt2 = bigfix::sqrt_fix(&(BigInt::from(2) << s as usize), s);
    let m = bigfix::agm_fix(&one, &sqrt2, s);
    let m2 = bigfix::mul_fix(&m, &m, s);
    let two_pi = bigfix::pi(s) << 1usize;
    let c0 = bigfix::div_fix(&two_pi, &m2, s);
    XReal::from_fix(&c0, s, &BigInt::from(64), prec, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_values() {
        assert!((ln2(53, Round::Nearest).to_f64() - std::f64::consts::LN_2).abs() < 1e-16);
        assert!((pi(53, Round::Nearest).to_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!((ln10(53, Round::Nearest).to_f64() - std::f64::consts::LN_10).abs() < 1e-15);
        assert!(ln2(53, Round::Floor) <= ln2(53, Round::Ceil));
    }

    #[test]
    fn c0_value() {
        // Gamma(1/4) = 3.62561...; C0 = Gamma(1/4)^4/(4 pi^2) = 4.3768796...
        let c0 = punctured_plane_c0(53, Round::Nearest).to_f64();
        assert!((c0 - 4.376879).abs() < 1e-5, "C0 = {c0}");
    }
}
