//! Check verdicts: the single result type every verifier emits.
//!
//! A verdict records which inequality instance was judged, the outcome, and
//! the certified signed log-slack. An enclosure that straddles the boundary
//! yields `Inconclusive`, never a guess.

use xlog::{Round, XBound, XInterval, XReal};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    /// Convexity below the empirical threshold radius R(f): recorded, not a
    /// failure.
    BelowThreshold,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::BelowThreshold => "below-threshold",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One judged inequality instance.
#[derive(Clone, Debug)]
pub struct CheckVerdict {
    /// Which campaign produced this ("ex1", "convexity", ...).
    pub example: String,
    /// Step or grid index; -1 when not indexed.
    pub n: i64,
    /// Which inequality, human-readable and stable.
    pub inequality: String,
    pub status: Status,
    /// Certified signed slack (lower endpoint of the margin enclosure), in
    /// natural-log units. None when unbounded below.
    pub margin: Option<XReal>,
    /// Margin enclosure endpoints.
    pub margin_lo: XBound,
    pub margin_hi: XBound,
}

impl CheckVerdict {
    /// Judge `lhs <= rhs` from enclosures. Pass needs the whole enclosure on
    /// the correct side with positive slack.
    pub fn from_le(example: &str, n: i64, inequality: &str, lhs: &XInterval, rhs: &XInterval) -> Self {
        let prec = 64;
        // margin = rhs - lhs as an interval
        let m_lo = match (rhs.lo(), lhs.hi()) {
            (XBound::Finite(r), XBound::Finite(l)) => XBound::Finite(r.sub_rm(l, prec, Round::Floor)),
            (XBound::PosInf, b) if b.is_finite() => XBound::PosInf,
            _ => XBound::NegInf,
        };
        let m_hi = match (rhs.hi(), lhs.lo()) {
            (XBound::Finite(r), XBound::Finite(l)) => XBound::Finite(r.sub_rm(l, prec, Round::Ceil)),
            (XBound::NegInf, _) | (_, XBound::PosInf) => XBound::NegInf,
            _ => XBound::PosInf,
        };
        // Pass: the whole margin enclosure is on the correct side (boundary
        // contact of exact values counts for these non-strict inequalities).
        // Fail: certainly violated. Straddling: inconclusive, never a guess.
        let status = match (&m_lo, &m_hi) {
            (XBound::Finite(lo), _) if lo.sign() >= 0 => Status::Pass,
            (XBound::PosInf, _) => Status::Pass,
            (_, XBound::Finite(hi)) if hi.sign() < 0 => Status::Fail,
            (_, XBound::NegInf) => Status::Fail,
            _ => Status::Inconclusive,
        };
        CheckVerdict {
            example: example.to_string(),
            n,
            inequality: inequality.to_string(),
            status,
            margin: m_lo.finite().cloned(),
            margin_lo: m_lo,
            margin_hi: m_hi,
        }
    }

    /// Judge `lhs >= rhs`.
    pub fn from_ge(example: &str, n: i64, inequality: &str, lhs: &XInterval, rhs: &XInterval) -> Self {
        Self::from_le(example, n, inequality, rhs, lhs)
    }

    /// Judge containment `inner subset-of outer` of log-annuli given by
    /// interval endpoints: inner.lo >= outer.lo and inner.hi <= outer.hi.
    /// The reported margin is the smaller of the two side margins.
    pub fn from_containment(
        example: &str,
        n: i64,
        inequality: &str,
        inner: &XInterval,
        outer: &XInterval,
    ) -> Self {
        // Per-side margin enclosure and status; `a - b` where containment
        // needs a >= b (sides flipped by the caller below).
        fn side(a: &XBound, b: &XBound) -> (Status, XBound, XBound) {
            let prec = 64;
            match (a, b) {
                (XBound::Finite(x), XBound::Finite(y)) => {
                    let lo = x.sub_rm(y, prec, Round::Floor);
                    let hi = x.sub_rm(y, prec, Round::Ceil);
                    let status = if lo.sign() >= 0 {
                        Status::Pass
                    } else if hi.sign() < 0 {
                        Status::Fail
                    } else {
                        Status::Inconclusive
                    };
                    (status, XBound::Finite(lo), XBound::Finite(hi))
                }
                // Outer side unbounded in the favorable direction.
                (_, XBound::NegInf) => (Status::Pass, XBound::PosInf, XBound::PosInf),
                (XBound::PosInf, _) => (Status::Pass, XBound::PosInf, XBound::PosInf),
                // Inner side unbounded where the outer is not: cannot fit.
                (XBound::NegInf, _) => (Status::Fail, XBound::NegInf, XBound::NegInf),
                (XBound::Finite(_), XBound::PosInf) => (Status::Fail, XBound::NegInf, XBound::NegInf),
            }
        }
        // Lower side: inner.lo - outer.lo >= 0; upper side: outer.hi - inner.hi >= 0.
        let (st_lo, lo_m_lo, lo_m_hi) = side(inner.lo(), outer.lo());
        let (st_hi, hi_m_lo, hi_m_hi) = side(&outer.hi().clone(), &inner.hi().clone());
        let status = match (st_lo, st_hi) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Pass, Status::Pass) => Status::Pass,
            _ => Status::Inconclusive,
        };
        // Report the tighter side's margin.
        let pick_lower = match (&lo_m_lo, &hi_m_lo) {
            (XBound::Finite(a), XBound::Finite(b)) => a <= b,
            (XBound::NegInf, _) => true,
            (_, XBound::NegInf) => false,
            (XBound::PosInf, _) => false,
            _ => true,
        };
        let (margin_lo, margin_hi) = if pick_lower { (lo_m_lo, lo_m_hi) } else { (hi_m_lo, hi_m_hi) };
        CheckVerdict {
            example: example.to_string(),
            n,
            inequality: inequality.to_string(),
            status,
            margin: margin_lo.finite().cloned(),
            margin_lo,
            margin_hi,
        }
    }

    pub fn new_status(example: &str, n: i64, inequality: &str, status: Status) -> Self {
        CheckVerdict {
            example: example.to_string(),
            n,
            inequality: inequality.to_string(),
            status,
            margin: None,
            margin_lo: XBound::NegInf,
            margin_hi: XBound::PosInf,
        }
    }

    /// Margin in decimal-log units as a display string.
    pub fn margin_log10(&self) -> String {
        match &self.margin {
            None => "-inf".to_string(),
            Some(m) => {
                let prec = m.precision();
                let l10 = xlog::consts::ln10(prec, Round::Nearest);
                let v = m.div_rm(&l10, prec, Round::Nearest).expect("ln10 != 0");
                xlog::convert::to_decimal(&v, 6)
            }
        }
    }
}

impl std::fmt::Display for CheckVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} n={} {}: {} (margin_log10 {})",
            self.example,
            self.n,
            self.inequality,
            self.status,
            self.margin_log10()
        )
    }
}

/// Worst status over a batch, for exit codes: fail > inconclusive > pass.
pub fn worst_status(verdicts: &[CheckVerdict]) -> Status {
    let mut worst = Status::Pass;
    for v in verdicts {
        match v.status {
            Status::Fail => return Status::Fail,
            Status::Inconclusive | Status::BelowThreshold => worst = Status::Inconclusive,
            Status::Pass => {}
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> XInterval {
        XInterval::finite(
            XReal::from_f64(a, 53).unwrap(),
            XReal::from_f64(b, 53).unwrap(),
        )
    }

    #[test]
    fn le_triage() {
        assert_eq!(CheckVerdict::from_le("t", 0, "x", &iv(1.0, 2.0), &iv(3.0, 4.0)).status, Status::Pass);
        assert_eq!(CheckVerdict::from_le("t", 0, "x", &iv(5.0, 6.0), &iv(3.0, 4.0)).status, Status::Fail);
        assert_eq!(
            CheckVerdict::from_le("t", 0, "x", &iv(1.0, 3.5), &iv(3.0, 4.0)).status,
            Status::Inconclusive
        );
    }

    #[test]
    fn containment_triage() {
        // inner [2,3] in outer [1,4]: pass
        let v = CheckVerdict::from_containment("t", 0, "c", &iv(2.0, 3.0), &iv(1.0, 4.0));
        assert_eq!(v.status, Status::Pass);
        assert!((v.margin.unwrap().to_f64() - 1.0).abs() < 1e-12);
        // inner [0.5, 3] vs outer [1,4]: fail (inner.lo below outer.lo)
        let v = CheckVerdict::from_containment("t", 0, "c", &iv(0.5, 3.0), &iv(1.0, 4.0));
        assert_eq!(v.status, Status::Fail);
        // unbounded inner lower end: inconclusive
        let inner = XInterval::new(XBound::NegInf, XBound::Finite(XReal::from_f64(3.0, 53).unwrap()));
        let v = CheckVerdict::from_containment("t", 0, "c", &inner, &iv(1.0, 4.0));
        assert_eq!(v.status, Status::Inconclusive);
    }

    #[test]
    fn worst_status_order() {
        let p = CheckVerdict::new_status("t", 0, "a", Status::Pass);
        let i = CheckVerdict::new_status("t", 0, "b", Status::Inconclusive);
        let f = CheckVerdict::new_status("t", 0, "c", Status::Fail);
        assert_eq!(worst_status(&[p.clone()]), Status::Pass);
        assert_eq!(worst_status(&[p.clone(), i.clone()]), Status::Inconclusive);
        assert_eq!(worst_status(&[p, i, f]), Status::Fail);
    }
}
