//! Rigorous modulus bounds: exact max/min on circles for positive-zero
//! products, Jensen circle means, zero counting, and factor-by-factor
//! enclosures of log|f| over circles and axis segments.

use crate::spec::{FunctionSpec, MixedSumSpec, ProductSpec};
use crate::EfunError;
use xlog::kernels::{log1p_exp, log_abs_one_minus_exp};
use xlog::{log_abs_one_minus, Round, XBound, XInterval, XReal};

/// Where a modulus enclosure is taken.
#[derive(Clone, Debug)]
pub enum Region {
    /// All circles |z| = r with log r in the interval.
    Circle(XInterval),
    /// The positive real axis segment with log x in the interval.
    AxisSegment(XInterval),
}

impl Region {
    pub fn log_radius(&self) -> &XInterval {
        match self {
            Region::Circle(iv) | Region::AxisSegment(iv) => iv,
        }
    }
}

/// Enclosure of { log|f(z)| : z in region minus exclusion disks }.
#[derive(Clone, Debug)]
pub struct ModulusBounds {
    pub log_abs: XInterval,
    /// Some exponential saturated to an explicit [0, tiny] or [huge, +inf)
    /// factor while computing the enclosure.
    pub saturated: bool,
}

/// Exact per-circle bounds for a positive-zero product.
#[derive(Clone, Debug)]
pub struct CircleBounds {
    pub log_max: XInterval,
    /// None when the circle passes exactly through a zero: min modulus 0,
    /// log-min = -inf (a legal value, not an error).
    pub log_min: Option<XInterval>,
}

fn prec_of(x: &XReal) -> u32 {
    x.precision()
}

fn check_cutoff(spec: &ProductSpec, log_r: &XReal) -> Result<(), EfunError> {
    if let Some(t) = &spec.tail {
        if log_r > &t.log_cutoff {
            return Err(EfunError::TruncationExceeded);
        }
    }
    Ok(())
}

/// [a - b rounded down, a - b rounded up].
fn sub_iv(a: &XReal, b: &XReal) -> XInterval {
    let prec = prec_of(a).max(prec_of(b));
    XInterval::finite(a.sub_rm(b, prec, Round::Floor), a.sub_rm(b, prec, Round::Ceil))
}

/// Tail contribution for evaluation radius log_r: sum over dropped zeros of
/// log(1 + r/a_k) is in [0, 2 r/a_d]; of log(1 - r/a_k) in [-4 r/a_d, 0].
fn tail_bounds(spec: &ProductSpec, log_r_hi: &XReal, budget: u64) -> (XInterval, XInterval, bool) {
    match &spec.tail {
        None => (XInterval::zero(), XInterval::zero(), false),
        Some(t) => {
            let prec = prec_of(log_r_hi);
            let l = log_r_hi.sub_rm(&t.first_dropped_log, prec, Round::Ceil);
            let (ratio, sat) = XInterval::point(l).exp(budget);
            let hi = ratio
                .hi_real()
                .expect("tail ratio finite")
                .mul_pow2(1)
                .mul_rm(&XReal::from_u64(t.branches.max(1) as u64, prec), prec, Round::Ceil);
            let up = XInterval::finite(XReal::zero(), hi.clone());
            let down = XInterval::finite(hi.mul_pow2(1).neg(), XReal::zero());
            (up, down, sat)
        }
    }
}

/// log(1 + e^L) over an L-interval (monotone increasing).
pub fn log1p_exp_iv(l: &XInterval) -> XInterval {
    let prec = l
        .lo_real()
        .map_or(53, prec_of)
        .max(l.hi_real().map_or(53, prec_of));
    let lo = match l.lo() {
        XBound::NegInf => XBound::Finite(XReal::zero()),
        XBound::Finite(x) => XBound::Finite(log1p_exp(x, prec, Round::Floor)),
        XBound::PosInf => unreachable!(),
    };
    let hi = match l.hi() {
        XBound::PosInf => XBound::PosInf,
        XBound::Finite(x) => XBound::Finite(log1p_exp(x, prec, Round::Ceil)),
        XBound::NegInf => XBound::Finite(XReal::zero()),
    };
    XInterval::new(lo, hi)
}

/// log|1 - e^L| over an L-interval, for a REAL factor 1 - r/a with r, a > 0.
/// Decreasing below 0, increasing above; straddling means the factor may
/// vanish: the lower bound is the exclusion (or -inf).
pub fn log_abs_one_minus_exp_real_iv(l: &XInterval, exclusion: Option<&XReal>) -> XInterval {
    let prec = l
        .lo_real()
        .map_or(53, prec_of)
        .max(l.hi_real().map_or(53, prec_of));
    let zero = XReal::zero();
    let lo_neg = match l.hi() {
        XBound::Finite(h) => h.sign() < 0,
        XBound::NegInf => true,
        XBound::PosInf => false,
    };
    let hi_pos = match l.lo() {
        XBound::Finite(lo) => lo.sign() > 0,
        XBound::PosInf => true,
        XBound::NegInf => false,
    };
    if lo_neg {
        // Entirely below the zero: decreasing in L.
        let lo = match l.hi() {
            XBound::Finite(h) => XBound::Finite(log_abs_one_minus_exp(h, prec, Round::Floor)),
            _ => unreachable!(),
        };
        let hi = match l.lo() {
            XBound::NegInf => XBound::Finite(zero),
            XBound::Finite(x) => XBound::Finite(log_abs_one_minus_exp(x, prec, Round::Ceil)),
            XBound::PosInf => unreachable!(),
        };
        return XInterval::new(lo, hi);
    }
    if hi_pos {
        // Entirely above: increasing in L.
        let lo = match l.lo() {
            XBound::Finite(x) => XBound::Finite(log_abs_one_minus_exp(x, prec, Round::Floor)),
            _ => unreachable!(),
        };
        let hi = match l.hi() {
            XBound::PosInf => XBound::PosInf,
            XBound::Finite(x) => XBound::Finite(log_abs_one_minus_exp(x, prec, Round::Ceil)),
            XBound::NegInf => unreachable!(),
        };
        return XInterval::new(lo, hi);
    }
    // The factor may vanish inside the range.
    let mut hi = XBound::NegInf;
    if let XBound::Finite(x) = l.lo() {
        if !x.is_zero() {
            hi = XBound::Finite(log_abs_one_minus_exp(x, prec, Round::Ceil));
        }
    }
    if let XBound::Finite(x) = l.hi() {
        if !x.is_zero() {
            let c = log_abs_one_minus_exp(x, prec, Round::Ceil);
            if match &hi {
                XBound::NegInf => true,
                XBound::Finite(h) => &c > h,
                XBound::PosInf => false,
            } {
                hi = XBound::Finite(c);
            }
        }
    }
    if matches!(l.hi(), XBound::PosInf) {
        hi = XBound::PosInf;
    }
    if hi == XBound::NegInf {
        // Degenerate interval pinned at the zero itself.
        hi = XBound::Finite(XReal::zero()); // |1 - w| <= 2, log <= ln 2 <= ... use 1 > ln 2
    }
    let lo = match exclusion {
        Some(e) if e.sign() > 0 => {
            XBound::Finite(e.ln_rm(prec, Round::Floor).expect("positive exclusion"))
        }
        _ => XBound::NegInf,
    };
    XInterval::new(lo, hi)
}

/// Exact max/min modulus on |z| = r for a positive-zero product: every
/// factor |1 - z/a| with a > 0 is maximized at z = -r and minimized at
/// z = +r simultaneously, so both extremes have closed forms.
pub fn exact_max_min_modulus(
    spec: &ProductSpec,
    log_r: &XReal,
    budget: u64,
) -> Result<CircleBounds, EfunError> {
    check_cutoff(spec, log_r)?;
    let p = spec.power_at_zero;
    let base = XInterval::point(log_r.clone()).scale_int(&num_bigint::BigInt::from(p));
    let (tail_up, tail_down, _sat) = tail_bounds(spec, log_r, budget);

    let mut log_max = base.clone().add(&tail_up);
    let mut log_min: Option<XInterval> = Some(base.add(&tail_down));
    for z in &spec.zeros {
        let l = sub_iv(log_r, &z.log_modulus);
        let mult = num_bigint::BigInt::from(z.multiplicity);
        let up = log1p_exp_iv(&l).scale_int(&mult);
        log_max = log_max.add(&up);
        if log_r == &z.log_modulus {
            log_min = None;
        } else if let Some(acc) = log_min {
            let down = log_abs_one_minus_exp_real_iv(&l, None).scale_int(&mult);
            log_min = Some(acc.add(&down));
        }
    }
    Ok(CircleBounds { log_max, log_min })
}

/// Closed-form Jensen circle mean of log|f| over |z| = r:
/// mu(r) = p log r + sum over zeros with a <= r of mult * log(r / a).
/// Zeros on the circle count as inside (the term vanishes either way).
pub fn jensen_mean(spec: &ProductSpec, log_r: &XReal) -> Result<XInterval, EfunError> {
    check_cutoff(spec, log_r)?;
    let p = spec.power_at_zero;
    let mut mu = XInterval::point(log_r.clone()).scale_int(&num_bigint::BigInt::from(p));
    for z in &spec.zeros {
        if &z.log_modulus <= log_r {
            let term = sub_iv(log_r, &z.log_modulus)
                .scale_int(&num_bigint::BigInt::from(z.multiplicity));
            mu = mu.add(&term);
        }
    }
    Ok(mu)
}

/// Number of zeros with modulus strictly below t, counting the origin power.
pub fn zero_count_below(spec: &ProductSpec, log_t: &XReal) -> Result<u64, EfunError> {
    if let Some(t) = &spec.tail {
        if log_t > &t.first_dropped_log {
            return Err(EfunError::TruncationExceeded);
        }
    }
    let mut count = spec.power_at_zero as u64;
    for z in &spec.zeros {
        if &z.log_modulus < log_t {
            count += z.multiplicity as u64;
        }
    }
    Ok(count)
}

/// Upper bound of log(sum of e^{t_j}) from the per-term uppers.
pub fn log_sum_upper(uppers: &[XBound]) -> XBound {
    let finite: Vec<&XReal> = uppers
        .iter()
        .map(|b| match b {
            XBound::PosInf => None,
            XBound::Finite(x) => Some(x),
            XBound::NegInf => None, // vanishing term: drop from the sum
        })
        .flatten()
        .collect();
    if uppers.iter().any(|b| matches!(b, XBound::PosInf)) {
        return XBound::PosInf;
    }
    if finite.is_empty() {
        return XBound::NegInf;
    }
    let mut acc = finite[0].clone();
    let prec = finite.iter().map(|x| x.precision()).max().unwrap();
    for t in &finite[1..] {
        // log(e^acc + e^t) = max + log(1 + e^{min-max})
        let (hi, lo) = if &acc >= *t { (acc.clone(), (*t).clone()) } else { ((*t).clone(), acc.clone()) };
        let d = lo.sub_rm(&hi, prec, Round::Ceil);
        acc = hi.add_rm(&log1p_exp(&d, prec, Round::Ceil), prec, Round::Ceil);
    }
    XBound::Finite(acc)
}

/// Lower bound of log(e^{d} - sum others) given the dominant term's lower
/// bound and an upper bound of the others' sum (both in log form).
pub fn log_dominated_lower(dominant_lo: &XReal, others_hi: &XBound) -> XBound {
    match others_hi {
        XBound::PosInf => XBound::NegInf,
        XBound::NegInf => XBound::Finite(dominant_lo.clone()),
        XBound::Finite(o) => {
            let prec = dominant_lo.precision().max(o.precision());
            let d = o.sub_rm(dominant_lo, prec, Round::Ceil);
            if d.sign() >= 0 {
                return XBound::NegInf;
            }
            XBound::Finite(
                dominant_lo.add_rm(&log_abs_one_minus_exp(&d, prec, Round::Floor), prec, Round::Floor),
            )
        }
    }
}

/// Upper bound of log M(r, P) for P(z) = sum c_k z^k: log sum |c_k| r^k.
pub fn poly_log_max(coeffs: &[XReal], log_r: &XInterval, _budget: u64) -> XBound {
    let hi_r = match log_r.hi() {
        XBound::Finite(h) => h.clone(),
        XBound::PosInf => return XBound::PosInf,
        XBound::NegInf => XReal::zero(),
    };
    let prec = hi_r.precision();
    let mut uppers: Vec<XBound> = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let lc = c.abs().ln_rm(prec, Round::Ceil).expect("positive");
        let term = lc.add_rm(
            &hi_r.mul_rm(&XReal::from_u64(k as u64, prec), prec, Round::Ceil),
            prec,
            Round::Ceil,
        );
        uppers.push(XBound::Finite(term));
    }
    log_sum_upper(&uppers)
}

/// Factor-by-factor enclosure of log|f| over a region.
///
/// For circles the complex triangle inequality drives every factor; on the
/// positive axis the tighter real bounds apply. Exclusions assert
/// |1 - z/a_k| >= bound for the indexed zero and give the straddling factor
/// a finite lower bound.
pub fn modulus_interval(
    spec: &FunctionSpec,
    region: &Region,
    exclusions: &[(usize, XReal)],
    budget: u64,
) -> Result<ModulusBounds, EfunError> {
    match spec {
        FunctionSpec::Product(p) => product_modulus(p, region, exclusions, budget),
        FunctionSpec::Mixed(m) => mixed_modulus(m, region, exclusions, budget),
        FunctionSpec::Exp => exp_modulus(region, budget),
        FunctionSpec::Perturbed { base, poly } => {
            let b = modulus_interval(base, region, exclusions, budget)?;
            if poly.iter().all(|c| c.is_zero()) {
                return Ok(b);
            }
            let p_hi = poly_log_max(poly, region.log_radius(), budget);
            let lo = match (b.log_abs.lo(), &p_hi) {
                (XBound::Finite(fl), XBound::Finite(ph)) => {
                    log_dominated_lower(fl, &XBound::Finite(ph.clone()))
                }
                (XBound::Finite(fl), XBound::NegInf) => XBound::Finite(fl.clone()),
                _ => XBound::NegInf,
            };
            let hi = log_sum_upper(&[b.log_abs.hi().clone(), p_hi]);
            Ok(ModulusBounds { log_abs: XInterval::new(lo, hi), saturated: b.saturated })
        }
    }
}

fn product_modulus(
    spec: &ProductSpec,
    region: &Region,
    exclusions: &[(usize, XReal)],
    budget: u64,
) -> Result<ModulusBounds, EfunError> {
    let riv = region.log_radius();
    let r_hi = match riv.hi() {
        XBound::Finite(h) => h.clone(),
        _ => return Err(EfunError::Domain("unbounded evaluation radius".into())),
    };
    check_cutoff(spec, &r_hi)?;
    let (tail_up, tail_down, sat) = tail_bounds(spec, &r_hi, budget);
    let mut acc = riv
        .scale_int(&num_bigint::BigInt::from(spec.power_at_zero))
        .add(&tail_up.union(&tail_down));
    for (k, z) in spec.zeros.iter().enumerate() {
        let l = riv.sub(&XInterval::point(z.log_modulus.clone()));
        let excl = exclusions.iter().find(|(i, _)| *i == k).map(|(_, e)| e);
        let f = match region {
            Region::Circle(_) => log_abs_one_minus(&l, excl),
            Region::AxisSegment(_) => log_abs_one_minus_exp_real_iv(&l, excl),
        };
        let f = f.scale_int(&num_bigint::BigInt::from(z.multiplicity));
        acc = acc.add(&f);
    }
    Ok(ModulusBounds { log_abs: acc, saturated: sat })
}

fn exp_modulus(region: &Region, budget: u64) -> Result<ModulusBounds, EfunError> {
    let riv = region.log_radius();
    let (r, sat) = riv.exp(budget);
    let bounds = match region {
        Region::Circle(_) => {
            // Re z ranges over [-r, r] on the circle.
            let hi = r.hi().clone();
            let lo = match &hi {
                XBound::Finite(h) => XBound::Finite(h.neg()),
                XBound::PosInf => XBound::NegInf,
                XBound::NegInf => unreachable!(),
            };
            XInterval::new(lo, hi)
        }
        Region::AxisSegment(_) => r,
    };
    Ok(ModulusBounds { log_abs: bounds, saturated: sat })
}

fn mixed_modulus(
    spec: &MixedSumSpec,
    region: &Region,
    exclusions: &[(usize, XReal)],
    budget: u64,
) -> Result<ModulusBounds, EfunError> {
    let riv = region.log_radius();
    let h = product_modulus(&spec.product_part, region, exclusions, budget)?;
    let mut saturated = h.saturated;

    // Per-term enclosures of log|g_j| over the region.
    let prec = riv.hi_real().map_or(53, prec_of);
    let ln2 = xlog::consts::ln2(prec, Round::Ceil);
    let mut term_iv: Vec<XInterval> = Vec::new();
    for t in &spec.terms {
        let wlog = t.m.mul(&riv.sub(&t.log_scale));
        let small = match wlog.hi() {
            XBound::Finite(h) => h <= &ln2.neg(),
            XBound::NegInf => true,
            XBound::PosInf => false,
        };
        let iv = if small {
            // (m1): |e^w - 1| within a factor 2 of |w| for |w| <= 1/2.
            let band = XInterval::finite(ln2.neg(), ln2.clone());
            t.log_amplitude.add(&wlog).add(&band)
        } else {
            match region {
                Region::Circle(_) => {
                    // |g_j| <= a_j (e^{|w|} + 1) <= a_j e^{|w|} * 2; the term can
                    // vanish on the circle, so no lower bound.
                    let (wval, s) = wlog.exp(budget);
                    saturated |= s;
                    let hi = match (t.log_amplitude.hi(), wval.hi()) {
                        (XBound::Finite(a), XBound::Finite(w)) => {
                            let u = a.add_rm(w, prec, Round::Ceil).add_rm(&ln2, prec, Round::Ceil);
                            XBound::Finite(u)
                        }
                        _ => XBound::PosInf,
                    };
                    XInterval::new(XBound::NegInf, hi)
                }
                Region::AxisSegment(_) => {
                    // g_j(x) = a_j (1 - e^{-w}), w = (x/S)^m > 0, increasing in x.
                    let (wval, s) = wlog.exp(budget);
                    saturated |= s;
                    let one_m = |v: &XBound, mode: Round| -> XBound {
                        match v {
                            XBound::Finite(w) if !w.is_zero() => XBound::Finite(
                                log_abs_one_minus_exp(&w.neg(), prec, mode),
                            ),
                            XBound::Finite(_) => XBound::NegInf, // w = 0: factor 0
                            XBound::PosInf => XBound::Finite(XReal::zero()),
                            XBound::NegInf => XBound::NegInf,
                        }
                    };
                    let lo = match (t.log_amplitude.lo(), one_m(wval.lo(), Round::Floor)) {
                        (XBound::Finite(a), XBound::Finite(f)) => {
                            XBound::Finite(a.add_rm(&f, prec, Round::Floor))
                        }
                        _ => XBound::NegInf,
                    };
                    let hi = match (t.log_amplitude.hi(), one_m(wval.hi(), Round::Ceil)) {
                        (XBound::Finite(a), XBound::Finite(f)) => {
                            XBound::Finite(a.add_rm(&f, prec, Round::Ceil))
                        }
                        (XBound::Finite(a), XBound::PosInf) => XBound::Finite(a.clone()),
                        _ => XBound::PosInf,
                    };
                    XInterval::new(lo, hi)
                }
            }
        };
        term_iv.push(iv);
    }
    // Optional tail beyond the listed terms, dominated by the last.
    let mut uppers: Vec<XBound> = term_iv.iter().map(|iv| iv.hi().clone()).collect();
    if spec.tail_dominated_by_last {
        if let Some(last) = term_iv.last() {
            uppers.push(last.hi().clone());
        }
    }
    let g_hi = log_sum_upper(&uppers);
    // Dominant term for the lower bound: greatest finite lower endpoint.
    let mut g_lo = XBound::NegInf;
    for (j, iv) in term_iv.iter().enumerate() {
        if let XBound::Finite(dom) = iv.lo() {
            let others: Vec<XBound> = term_iv
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, o)| o.hi().clone())
                .chain(if spec.tail_dominated_by_last {
                    term_iv.last().map(|l| l.hi().clone()).into_iter().collect::<Vec<_>>()
                } else {
                    vec![]
                })
                .collect();
            let cand = log_dominated_lower(dom, &log_sum_upper(&others));
            if let XBound::Finite(c) = &cand {
                match &g_lo {
                    XBound::NegInf => g_lo = cand.clone(),
                    XBound::Finite(cur) if c > cur => g_lo = cand.clone(),
                    _ => {}
                }
            }
        }
    }
    let g = XInterval::new(g_lo, g_hi);
    Ok(ModulusBounds { log_abs: g.add(&h.log_abs), saturated })
}
