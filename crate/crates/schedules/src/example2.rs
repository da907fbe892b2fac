//! The second construction: f(z) = z^2 prod over blocks n of
//! (1 - z/s_m^{n!}) for m in [(n!)^2, ((n+1)!)^2), with s_{m+1} = s_m^{m+1}
//! (so log s_m = m! log s1), and the exponent tracks
//! a_m = 2 - sum_{i=N2}^{m-1} 2/i^{3/2}, b_{m,n} = n! - 1.

use crate::SchedError;
use efun::{ProductSpec, TailInfo, ZeroTerm};
use num_bigint::BigInt;
use xlog::{Round, XInterval, XReal};

#[derive(Clone, Debug)]
pub struct Example2Schedule {
    pub s1: XReal,
    pub m_max: u32,
    pub n2: u32,
    /// factorials[m-1] = m! (the log s1 coefficient of s_m).
    pub factorials: Vec<BigInt>,
    pub log_s1: XInterval,
    /// a_track[m-1] = a_m enclosure (n-independent).
    pub a_track: Vec<XInterval>,
    pub log10_exact: Option<Vec<BigInt>>,
    prec: u32,
}

/// Block index n(m) with (n!)^2 <= m < ((n+1)!)^2; the zero at index m has
/// exponent n!.
pub fn block_exponent(m: u64) -> u64 {
    let mut n = 1u64;
    let mut fact = 1u64;
    loop {
        let next_fact = fact * (n + 1);
        if (fact * fact) <= m && m < next_fact * next_fact {
            return fact;
        }
        n += 1;
        fact = next_fact;
        if n > 20 {
            panic!("block index out of supported range");
        }
    }
}

/// Smallest N2 with sum_{i >= N2} 2 i^{-3/2} < 1, certified by a partial sum
/// plus the integral tail 4/sqrt(M).
fn find_n2(prec: u32) -> Result<u32, SchedError> {
    const M: u64 = 1 << 14;
    let tail = XReal::from_u64(4, prec)
        .div_rm(
            &XReal::from_u64(M, prec).sqrt_rm(prec, Round::Floor).unwrap(),
            prec,
            Round::Ceil,
        )
        .unwrap();
    let mut sum = tail;
    let one = XReal::one(prec);
    let mut stack: Vec<(u64, XReal)> = Vec::new();
    for i in (2..=M).rev() {
        let term = XReal::from_u64(2, prec)
            .div_rm(
                &XReal::from_u64(i, prec)
                    .mul_rm(
                        &XReal::from_u64(i, prec).sqrt_rm(prec, Round::Floor).unwrap(),
                        prec,
                        Round::Floor,
                    ),
                prec,
                Round::Ceil,
            )
            .unwrap();
        sum = sum.add_rm(&term, prec, Round::Ceil);
        stack.push((i, sum.clone()));
    }
    for (i, s) in stack.into_iter().rev() {
        if s < one {
            return Ok(i as u32);
        }
    }
    Err(SchedError::Domain("no admissible N2 for the 2/i^{3/2} sum".into()))
}

pub fn generate_example2(s1: &XReal, m_max: u32, prec: u32) -> Result<Example2Schedule, SchedError> {
    if s1 <= &XReal::one(prec) {
        return Err(SchedError::BadParameter("s1 must exceed 1".into()));
    }
    if m_max < 4 {
        return Err(SchedError::BadParameter("m_max too small".into()));
    }
    let n2 = find_n2(prec)?;
    let mut factorials = vec![BigInt::from(1)];
    for m in 2..=m_max as u64 {
        let next = factorials.last().unwrap() * BigInt::from(m);
        factorials.push(next);
    }
    let log_s1 = XInterval::finite(
        s1.ln_rm(prec, Round::Floor).map_err(|e| SchedError::Domain(e.to_string()))?,
        s1.ln_rm(prec, Round::Ceil).map_err(|e| SchedError::Domain(e.to_string()))?,
    );
    // a_m = 2 - sum_{i=n2}^{m-1} 2/i^{3/2}
    let mut a_track = Vec::with_capacity(m_max as usize);
    let mut acc = XInterval::point(XReal::from_u64(2, prec));
    for m in 1..=m_max as u64 {
        a_track.push(acc.clone());
        if m >= n2 as u64 {
            let i = XReal::from_u64(m, prec);
            let i32_ = i.mul_rm(&i.sqrt_rm(prec, Round::Floor).unwrap(), prec, Round::Floor);
            let i32_hi = i.mul_rm(&i.sqrt_rm(prec, Round::Ceil).unwrap(), prec, Round::Ceil);
            let term = XInterval::point(XReal::from_u64(2, prec))
                .div(&XInterval::finite(i32_, i32_hi))
                .unwrap();
            acc = acc.sub(&term);
        }
    }
    let log10_exact = crate::example1::power_of_ten_exponent(s1)
        .map(|k| factorials.iter().map(|f| f * &k).collect::<Vec<BigInt>>());
    Ok(Example2Schedule { s1: s1.clone(), m_max, n2, factorials, log_s1, a_track, log10_exact, prec })
}

impl Example2Schedule {
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// log s_m enclosure (1-based).
    pub fn log_s_iv(&self, m: u32) -> XInterval {
        self.log_s1.scale_int(&self.factorials[(m - 1) as usize])
    }

    /// Dyadic log-modulus of the zero at index m: n(m)! * log s_m.
    pub fn zero_log(&self, m: u32) -> XReal {
        let e = block_exponent(m as u64);
        let coeff = &self.factorials[(m - 1) as usize] * BigInt::from(e);
        self.log_s1.scale_int(&coeff).midpoint().unwrap()
    }

    /// a_{m} track enclosure (valid for m >= (n!)^2 of its block).
    pub fn a_iv(&self, m: u32) -> &XInterval {
        &self.a_track[(m - 1) as usize]
    }

    /// Hypothesis verdicts: 1 <= a_m <= 2 wherever the track is consumed.
    pub fn validate(&self, m_from: u32, m_to: u32) -> Vec<verdict::CheckVerdict> {
        let prec = self.prec;
        let one = XInterval::point(XReal::one(prec));
        let two = XInterval::point(XReal::from_u64(2, prec));
        let mut out = Vec::new();
        for m in m_from..=m_to.min(self.m_max) {
            let a = self.a_iv(m);
            out.push(verdict::CheckVerdict::from_ge("ex2", m as i64, "track a_m >= 1", a, &one));
            out.push(verdict::CheckVerdict::from_le("ex2", m as i64, "track a_m <= 2", a, &two));
        }
        out
    }

    /// Truncated product for radii up to max_log_radius.
    pub fn product_spec(&self, max_log_radius: &XReal) -> Result<ProductSpec, SchedError> {
        let prec = self.prec;
        let ln_b = XReal::from_u64(16, prec).ln_rm(prec, Round::Ceil).unwrap();
        let keep_below = max_log_radius.add_rm(&ln_b, prec, Round::Ceil);
        let mut zeros = Vec::new();
        let mut first_dropped = None;
        for m in 1..=self.m_max {
            let z = self.zero_log(m);
            if z <= keep_below {
                zeros.push(ZeroTerm { log_modulus: z, multiplicity: 1 });
            } else {
                first_dropped = Some(z);
                break;
            }
        }
        let first = first_dropped.ok_or(SchedError::ScheduleTooShort)?;
        let cutoff = first.sub_rm(&ln_b, prec, Round::Floor);
        Ok(ProductSpec::truncated(
            2,
            zeros,
            TailInfo { first_dropped_log: first, log_cutoff: cutoff, branches: 1 },
        ))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,block_exponent,log10_s_m,a_m\n");
        let prec = self.prec;
        let ln10 = xlog::consts::ln10(prec, Round::Nearest);
        for m in 1..=self.m_max {
            let log10 = match &self.log10_exact {
                Some(v) => v[(m - 1) as usize].to_string(),
                None => {
                    let mid = self.log_s_iv(m).midpoint().unwrap();
                    xlog::convert::to_decimal(&mid.div_rm(&ln10, prec, Round::Nearest).unwrap(), 17)
                }
            };
            out.push_str(&format!(
                "{},{},{},{}\n",
                m,
                block_exponent(m as u64),
                log10,
                xlog::convert::to_decimal(&self.a_iv(m).midpoint().unwrap(), 17),
            ));
        }
        out
    }
}

pub fn example2_from_decimal(s1: &str, m_max: u32, prec: u32) -> Result<Example2Schedule, SchedError> {
    let s1 = xlog::convert::parse_decimal(s1, prec, Round::Nearest)
        .map_err(|e| SchedError::BadParameter(e.to_string()))?;
    generate_example2(&s1, m_max, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_exponents() {
        // log10 s_m = m! for m = 1..8 at s1 = 10.
        let s = example2_from_decimal("10", 8, 53).unwrap();
        let expect = [1u64, 2, 6, 24, 120, 720, 5040, 40320];
        let exact = s.log10_exact.as_ref().unwrap();
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(exact[i], BigInt::from(*e));
        }
    }

    #[test]
    fn block_exponents() {
        assert_eq!(block_exponent(1), 1);
        assert_eq!(block_exponent(3), 1);
        assert_eq!(block_exponent(4), 2);
        assert_eq!(block_exponent(35), 2);
        assert_eq!(block_exponent(36), 6);
        assert_eq!(block_exponent(575), 6);
        assert_eq!(block_exponent(576), 24);
    }

    #[test]
    fn track_in_range() {
        let s = example2_from_decimal("10", 64, 53).unwrap();
        for v in s.validate(4, 64) {
            assert_eq!(v.status, verdict::Status::Pass, "{v}");
        }
        assert!(s.n2 >= 10 && s.n2 <= 40, "n2 = {}", s.n2);
    }

    #[test]
    fn spec_for_small_radius() {
        let s = example2_from_decimal("10", 40, 53).unwrap();
        // Radius s_35^2-ish.
        let r = s.zero_log(35);
        let spec = s.product_spec(&r).unwrap();
        assert_eq!(spec.power_at_zero, 2);
        assert!(spec.zeros.len() >= 34, "zeros up to index ~35");
    }
}
