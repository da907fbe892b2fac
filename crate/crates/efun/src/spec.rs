//! Structured descriptions of the entire functions under study.

use xlog::{XInterval, XReal};

/// A positive real zero of a product, given by the natural log of its
/// modulus, with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroTerm {
    pub log_modulus: XReal,
    pub multiplicity: u32,
}

/// Rigorous tail metadata for a truncated infinite product.
///
/// Validity rests on the schedules growing at least doubly exponentially:
/// every dropped zero modulus at least doubles the previous one, so
/// sum log(1 + r/a_k) over dropped k is at most twice the first dropped term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailInfo {
    /// log-modulus of the first zero dropped by truncation.
    pub first_dropped_log: XReal,
    /// Largest admissible evaluation log-radius (first dropped minus log B).
    pub log_cutoff: XReal,
    /// Number of interleaved doubling families among the dropped zeros; the
    /// tail bound scales linearly with it.
    pub branches: u32,
}

/// f(z) = z^p * prod (1 - z/a_k) with every a_k > 0, zeros sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSpec {
    pub power_at_zero: u32,
    pub zeros: Vec<ZeroTerm>,
    /// None: the product is genuinely finite (a polynomial).
    pub tail: Option<TailInfo>,
}

impl ProductSpec {
    pub fn polynomial(power_at_zero: u32, zeros: Vec<ZeroTerm>) -> ProductSpec {
        let mut zeros = zeros;
        zeros.sort_by(|a, b| a.log_modulus.cmp_value(&b.log_modulus));
        ProductSpec { power_at_zero, zeros, tail: None }
    }

    pub fn truncated(power_at_zero: u32, zeros: Vec<ZeroTerm>, tail: TailInfo) -> ProductSpec {
        let mut zeros = zeros;
        zeros.sort_by(|a, b| a.log_modulus.cmp_value(&b.log_modulus));
        ProductSpec { power_at_zero, zeros, tail: Some(tail) }
    }

    /// Indices of zeros with log-modulus strictly inside (lo, hi).
    pub fn zeros_strictly_between(&self, lo: &XReal, hi: &XReal) -> Vec<usize> {
        self.zeros
            .iter()
            .enumerate()
            .filter(|(_, z)| &z.log_modulus > lo && &z.log_modulus < hi)
            .map(|(i, _)| i)
            .collect()
    }

    /// The nearest zero log-modulus <= x (None if none).
    pub fn nearest_zero_at_or_below(&self, x: &XReal) -> Option<&XReal> {
        self.zeros
            .iter()
            .rev()
            .map(|z| &z.log_modulus)
            .find(|l| *l <= x)
    }

    /// The nearest zero log-modulus >= x (None if none in the kept range).
    pub fn nearest_zero_at_or_above(&self, x: &XReal) -> Option<&XReal> {
        self.zeros.iter().map(|z| &z.log_modulus).find(|l| *l >= x)
    }
}

/// One term g_n(z) = a_n (exp(-(z/S_n)^{m_n}) - 1) of the mixed sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedTerm {
    /// log a_n
    pub log_amplitude: XInterval,
    /// log S_n
    pub log_scale: XInterval,
    /// m_n as a value (an integer, possibly astronomically large; the upper
    /// endpoint may be a saturation bound).
    pub m: XInterval,
    /// sqrt(log S_n), kept because the rearranged tail bound
    /// m_n (log r - sqrt(log S_n)) must be formed without cancellation.
    pub sqrt_log_scale: XInterval,
}

/// f = g * h with g(z) = sum a_n (exp(-(z/S_n)^{m_n}) - 1) and h the
/// positive-zero product part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedSumSpec {
    pub terms: Vec<MixedTerm>,
    pub product_part: ProductSpec,
    /// Terms beyond the list are dominated by the last listed term with
    /// ratio <= 1/2 (schedule growth); the generic modulus bound doubles the
    /// last term to cover them.
    pub tail_dominated_by_last: bool,
}

/// A function under verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionSpec {
    Product(ProductSpec),
    Mixed(MixedSumSpec),
    /// The classical exponential e^z (calibration target for checkers).
    Exp,
    /// g = base + P for a polynomial P given by its coefficients (constant
    /// term first). Only |f| +- M(r, P) bounds are derived from it.
    Perturbed { base: Box<FunctionSpec>, poly: Vec<XReal> },
}

impl FunctionSpec {
    pub fn as_product(&self) -> Option<&ProductSpec> {
        match self {
            FunctionSpec::Product(p) => Some(p),
            _ => None,
        }
    }
}
