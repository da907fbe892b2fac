//! Outward-rounded intervals over extended-range reals, with first-class
//! infinite endpoints.

use crate::real::{ExpOutcome, Round, XReal};
use crate::XError;
use num_bigint::BigInt;
use std::cmp::Ordering;

/// An interval endpoint: finite, or one of the two infinities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XBound {
    NegInf,
    Finite(XReal),
    PosInf,
}

impl XBound {
    pub fn finite(&self) -> Option<&XReal> {
        match self {
            XBound::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, XBound::Finite(_))
    }

    fn cmp_bound(&self, other: &XBound) -> Ordering {
        use XBound::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (PosInf, _) | (_, NegInf) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp_value(b),
        }
    }

    fn neg(&self) -> XBound {
        match self {
            XBound::NegInf => XBound::PosInf,
            XBound::PosInf => XBound::NegInf,
            XBound::Finite(x) => XBound::Finite(x.neg()),
        }
    }
}

impl std::fmt::Display for XBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            XBound::NegInf => write!(f, "-inf"),
            XBound::PosInf => write!(f, "+inf"),
            XBound::Finite(x) => write!(f, "{x}"),
        }
    }
}

/// A closed interval of reals; infinite endpoints denote unboundedness on
/// that side (members are always finite reals).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XInterval {
    lo: XBound,
    hi: XBound,
}

impl XInterval {
    pub fn new(lo: XBound, hi: XBound) -> XInterval {
        let iv = XInterval { lo, hi };
        debug_assert!(iv.well_formed(), "inverted interval");
        iv
    }

    fn well_formed(&self) -> bool {
        match (&self.lo, &self.hi) {
            (XBound::Finite(a), XBound::Finite(b)) => a.cmp_value(b) != Ordering::Greater,
            (XBound::PosInf, _) | (_, XBound::NegInf) => false,
            _ => true,
        }
    }

    pub fn point(x: XReal) -> XInterval {
        XInterval { lo: XBound::Finite(x.clone()), hi: XBound::Finite(x) }
    }

    pub fn finite(lo: XReal, hi: XReal) -> XInterval {
        XInterval::new(XBound::Finite(lo), XBound::Finite(hi))
    }

    pub fn whole() -> XInterval {
        XInterval { lo: XBound::NegInf, hi: XBound::PosInf }
    }

    pub fn zero() -> XInterval {
        XInterval::point(XReal::zero())
    }

    /// Enclosure of an f64 value (exact: f64s are dyadic).
    pub fn from_f64(v: f64, prec: u32) -> Result<XInterval, XError> {
        Ok(XInterval::point(XReal::from_f64(v, prec.max(53))?))
    }

    pub fn lo(&self) -> &XBound {
        &self.lo
    }

    pub fn hi(&self) -> &XBound {
        &self.hi
    }

    pub fn lo_real(&self) -> Option<&XReal> {
        self.lo.finite()
    }

    pub fn hi_real(&self) -> Option<&XReal> {
        self.hi.finite()
    }

    pub fn is_point(&self) -> bool {
        match (&self.lo, &self.hi) {
            (XBound::Finite(a), XBound::Finite(b)) => a == b,
            _ => false,
        }
    }

    pub fn contains(&self, x: &XReal) -> bool {
        let lo_ok = match &self.lo {
            XBound::NegInf => true,
            XBound::Finite(l) => l.cmp_value(x) != Ordering::Greater,
            XBound::PosInf => false,
        };
        let hi_ok = match &self.hi {
            XBound::PosInf => true,
            XBound::Finite(h) => h.cmp_value(x) != Ordering::Less,
            XBound::NegInf => false,
        };
        lo_ok && hi_ok
    }

    pub fn contains_interval(&self, other: &XInterval) -> bool {
        self.lo.cmp_bound(&other.lo) != Ordering::Greater
            && self.hi.cmp_bound(&other.hi) != Ordering::Less
    }

    /// True if every member of self is strictly below every member of other.
    pub fn entirely_below(&self, other: &XInterval) -> bool {
        match (&self.hi, &other.lo) {
            (XBound::Finite(a), XBound::Finite(b)) => a.cmp_value(b) == Ordering::Less,
            _ => false,
        }
    }

    pub fn neg(&self) -> XInterval {
        XInterval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    fn prec(&self) -> u32 {
        let p1 = self.lo.finite().map_or(24, |x| x.precision());
        let p2 = self.hi.finite().map_or(24, |x| x.precision());
        p1.max(p2)
    }

    pub fn add(&self, other: &XInterval) -> XInterval {
        let prec = self.prec().max(other.prec());
        let lo = match (&self.lo, &other.lo) {
            (XBound::Finite(a), XBound::Finite(b)) => XBound::Finite(a.add_rm(b, prec, Round::Floor)),
            _ => XBound::NegInf,
        };
        let hi = match (&self.hi, &other.hi) {
            (XBound::Finite(a), XBound::Finite(b)) => XBound::Finite(a.add_rm(b, prec, Round::Ceil)),
            _ => XBound::PosInf,
        };
        XInterval { lo, hi }
    }

    pub fn sub(&self, other: &XInterval) -> XInterval {
        self.add(&other.neg())
    }

    /// Endpoint product with the 0 * inf = 0 convention, which is the correct
    /// endpoint candidate rule for products of real intervals.
    fn bound_mul(a: &XBound, b: &XBound, prec: u32, mode: Round) -> XBound {
        use XBound::*;
        match (a, b) {
            (Finite(x), Finite(y)) => Finite(x.mul_rm(y, prec, mode)),
            (Finite(x), inf) | (inf, Finite(x)) => {
                if x.is_zero() {
                    Finite(XReal::zero())
                } else {
                    let pos = x.sign() > 0;
                    match (inf, pos) {
                        (PosInf, true) | (NegInf, false) => PosInf,
                        _ => NegInf,
                    }
                }
            }
            (PosInf, PosInf) | (NegInf, NegInf) => PosInf,
            _ => NegInf,
        }
    }

    pub fn mul(&self, other: &XInterval) -> XInterval {
        // Exact zero annihilates, even against unbounded intervals (members
        // of an interval are finite reals).
        let zero = XInterval::zero();
        if self == &zero || other == &zero {
            return zero;
        }
        let prec = self.prec().max(other.prec());
        let cands = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<XBound> = None;
        let mut hi: Option<XBound> = None;
        for (a, b) in cands {
            let l = XInterval::bound_mul(a, b, prec, Round::Floor);
            let h = XInterval::bound_mul(a, b, prec, Round::Ceil);
            lo = Some(match lo {
                None => l,
                Some(cur) => {
                    if l.cmp_bound(&cur) == Ordering::Less {
                        l
                    } else {
                        cur
                    }
                }
            });
            hi = Some(match hi {
                None => h,
                Some(cur) => {
                    if h.cmp_bound(&cur) == Ordering::Greater {
                        h
                    } else {
                        cur
                    }
                }
            });
        }
        XInterval { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    /// Multiply by a point value.
    pub fn scale(&self, c: &XReal) -> XInterval {
        self.mul(&XInterval::point(c.clone()))
    }

    /// Multiply by an exact integer.
    pub fn scale_int(&self, c: &BigInt) -> XInterval {
        let prec = self.prec();
        let lo_c = XReal::from_bigint(c, prec, Round::Floor);
        let hi_c = XReal::from_bigint(c, prec, Round::Ceil);
        self.mul(&XInterval::new(XBound::Finite(lo_c), XBound::Finite(hi_c)))
    }

    /// Reciprocal of an interval that does not contain zero.
    pub fn recip(&self) -> Result<XInterval, XError> {
        if self.contains(&XReal::zero()) {
            return Err(XError::Domain("recip of interval containing 0".into()));
        }
        let prec = self.prec();
        let one = XReal::one(prec);
        let lo = match &self.hi {
            XBound::Finite(h) => XBound::Finite(one.div_rm(h, prec, Round::Floor)?),
            XBound::PosInf => XBound::Finite(XReal::zero()),
            XBound::NegInf => unreachable!(),
        };
        let hi = match &self.lo {
            XBound::Finite(l) => XBound::Finite(one.div_rm(l, prec, Round::Ceil)?),
            XBound::NegInf => XBound::Finite(XReal::zero()),
            XBound::PosInf => unreachable!(),
        };
        Ok(XInterval { lo, hi })
    }

    /// Division by an interval not containing zero.
    pub fn div(&self, other: &XInterval) -> Result<XInterval, XError> {
        Ok(self.mul(&other.recip()?))
    }

    /// Natural log. Requires some positive part; the lower bound collapses
    /// to -inf if the interval reaches 0 or below.
    pub fn ln(&self) -> Result<XInterval, XError> {
        let prec = self.prec();
        let hi = match &self.hi {
            XBound::PosInf => XBound::PosInf,
            XBound::Finite(h) => {
                if h.sign() <= 0 {
                    return Err(XError::Domain("ln of non-positive interval".into()));
                }
                XBound::Finite(h.ln_rm(prec, Round::Ceil)?)
            }
            XBound::NegInf => unreachable!(),
        };
        let lo = match &self.lo {
            XBound::NegInf => XBound::NegInf,
            XBound::Finite(l) => {
                if l.sign() <= 0 {
                    XBound::NegInf
                } else {
                    XBound::Finite(l.ln_rm(prec, Round::Floor)?)
                }
            }
            XBound::PosInf => unreachable!(),
        };
        Ok(XInterval { lo, hi })
    }

    /// Exponential with saturation budget. Returns the enclosure and whether
    /// any endpoint saturated.
    pub fn exp(&self, budget_bits: u64) -> (XInterval, bool) {
        let prec = self.prec();
        let mut saturated = false;
        let lo = match &self.lo {
            XBound::NegInf => XBound::Finite(XReal::zero()),
            XBound::Finite(l) => match l.exp_bounds(prec, budget_bits) {
                ExpOutcome::Enclosure(lo, _) => XBound::Finite(lo),
                ExpOutcome::SaturatedHigh(huge) => {
                    saturated = true;
                    XBound::Finite(huge)
                }
                ExpOutcome::SaturatedLow(_) => {
                    saturated = true;
                    XBound::Finite(XReal::zero())
                }
            },
            XBound::PosInf => unreachable!(),
        };
        let hi = match &self.hi {
            XBound::PosInf => XBound::PosInf,
            XBound::Finite(h) => match h.exp_bounds(prec, budget_bits) {
                ExpOutcome::Enclosure(_, hi) => XBound::Finite(hi),
                ExpOutcome::SaturatedHigh(_) => {
                    saturated = true;
                    XBound::PosInf
                }
                ExpOutcome::SaturatedLow(tiny) => {
                    saturated = true;
                    XBound::Finite(tiny)
                }
            },
            XBound::NegInf => unreachable!(),
        };
        (XInterval { lo, hi }, saturated)
    }

    /// Square root of a nonnegative interval (lower endpoint clamped to 0).
    pub fn sqrt(&self) -> Result<XInterval, XError> {
        let prec = self.prec();
        let lo = match &self.lo {
            XBound::NegInf => XBound::Finite(XReal::zero()),
            XBound::Finite(l) => {
                if l.sign() < 0 {
                    XBound::Finite(XReal::zero())
                } else {
                    XBound::Finite(l.sqrt_rm(prec, Round::Floor)?)
                }
            }
            XBound::PosInf => unreachable!(),
        };
        let hi = match &self.hi {
            XBound::PosInf => XBound::PosInf,
            XBound::Finite(h) => XBound::Finite(h.sqrt_rm(prec, Round::Ceil)?),
            XBound::NegInf => unreachable!(),
        };
        Ok(XInterval { lo, hi })
    }

    /// Convex hull.
    pub fn union(&self, other: &XInterval) -> XInterval {
        let lo = if self.lo.cmp_bound(&other.lo) == Ordering::Less {
            self.lo.clone()
        } else {
            other.lo.clone()
        };
        let hi = if self.hi.cmp_bound(&other.hi) == Ordering::Greater {
            self.hi.clone()
        } else {
            other.hi.clone()
        };
        XInterval { lo, hi }
    }

    /// Intersection; `None` is the explicit empty marker.
    pub fn intersect(&self, other: &XInterval) -> Option<XInterval> {
        let lo = if self.lo.cmp_bound(&other.lo) == Ordering::Greater {
            self.lo.clone()
        } else {
            other.lo.clone()
        };
        let hi = if self.hi.cmp_bound(&other.hi) == Ordering::Less {
            self.hi.clone()
        } else {
            other.hi.clone()
        };
        let iv = XInterval { lo, hi };
        if iv.well_formed() {
            Some(iv)
        } else {
            None
        }
    }

    /// Upper bound of the diameter; `None` when unbounded.
    pub fn width(&self) -> Option<XReal> {
        match (&self.lo, &self.hi) {
            (XBound::Finite(l), XBound::Finite(h)) => {
                let prec = l.precision().max(h.precision());
                Some(h.sub_rm(l, prec, Round::Ceil))
            }
            _ => None,
        }
    }

    /// Approximate midpoint (finite intervals only).
    pub fn midpoint(&self) -> Option<XReal> {
        match (&self.lo, &self.hi) {
            (XBound::Finite(l), XBound::Finite(h)) => {
                let prec = l.precision().max(h.precision());
                Some(l.add_rm(h, prec, Round::Nearest).mul_pow2(-1))
            }
            _ => None,
        }
    }
}

impl std::fmt::Display for XInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Enclosure of log|1 - w| given an enclosure of log|w|, for a complex w.
///
/// Uses the triangle inequality |1-w| in [| |w|-1 |, |w|+1]. When the
/// magnitude range allows |w| = 1 the lower bound degenerates to -inf unless
/// an exclusion bound |1-w| >= excl is supplied by the caller.
pub fn log_abs_one_minus(log_w: &XInterval, exclusion: Option<&XReal>) -> XInterval {
    let prec = log_w
        .lo_real()
        .map_or(53, |x| x.precision())
        .max(log_w.hi_real().map_or(53, |x| x.precision()));
    let ln2 = crate::consts::ln2(prec, Round::Floor);

    // Upper bound: log(1 + |w|) evaluated at the top of the range; the map
    // L -> log(1+e^L) is increasing.
    let hi = match log_w.hi() {
        XBound::PosInf => XBound::PosInf,
        XBound::Finite(h) => XBound::Finite(crate::kernels::log1p_exp(h, prec, Round::Ceil)),
        XBound::NegInf => XBound::Finite(XReal::zero()), // |w| -> 0: log|1-w| <= log(1+0) = 0
    };

    // Lower bound.
    let lo = match (log_w.lo(), log_w.hi()) {
        // Whole range has |w| >= 2: |1-w| >= |w| - 1, increasing in L.
        (XBound::Finite(l), _) if l.cmp_value(&ln2) != Ordering::Less => {
            XBound::Finite(crate::kernels::log_abs_one_minus_exp(l, prec, Round::Floor))
        }
        // Whole range has |w| <= 1/2: |1-w| >= 1 - |w|, decreasing in L.
        (_, XBound::Finite(h)) if h.cmp_value(&ln2.neg()) != Ordering::Greater => {
            XBound::Finite(crate::kernels::log_abs_one_minus_exp(h, prec, Round::Floor))
        }
        (_, XBound::NegInf) => XBound::Finite(XReal::zero()),
        // Straddles the unit circle: w may equal 1.
        _ => match exclusion {
            Some(e) => XBound::Finite(e.ln_rm(prec, Round::Floor).unwrap_or(XReal::zero())),
            None => XBound::NegInf,
        },
    };
    XInterval::new(lo, hi)
}
