//! One application of the Dujella–Pethő lemma: given a convergent `p/q` of
//! `tau` with `q > 6M` and `eps = ||mu q|| - M ||tau q|| > 0`, the inequality
//! `0 < |u tau - v + mu| < A B^-w` has no solution with `u <= M` and
//! `w >= log(A q / eps) / log B`.

use num_bigint::BigInt;
use num_traits::One;

use super::cf::CFExpansion;
use crate::algebraic::{log_interval, Dyadic, DyadicInterval};
use crate::error::{Error, Result};

/// Convergents tried after the first one with `q > 6M`.
pub const RETRY_CAP: usize = 25;

/// Precision of the final `log(A q / eps) / log B`; only a few digits matter.
const W_PREC: u32 = 128;

#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub tau: DyadicInterval,
    pub mu: DyadicInterval,
    pub a: DyadicInterval,
    pub b: DyadicInterval,
    pub m: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionOutcome {
    pub q_used: BigInt,
    /// Index of the convergent used.
    pub convergent_index: usize,
    /// Convergents examined before success, the successful one included.
    pub tries: usize,
    pub epsilon: DyadicInterval,
    pub w_bound: i64,
}

impl ReductionInstance {
    pub fn validate(&self) -> Result<()> {
        if !self.a.is_positive() {
            return Err(Error::Domain(format!("A = {} must be positive", self.a)));
        }
        if *self.b.lo() <= Dyadic::one() {
            return Err(Error::Domain(format!("B = {} must exceed 1", self.b)));
        }
        if self.m < BigInt::one() {
            return Err(Error::Domain(format!("M = {} must be at least 1", self.m)));
        }
        Ok(())
    }
}

/// Working precision for `x q` given the enclosure and the size of `q`.
fn product_prec(x: &DyadicInterval, q: &BigInt) -> u32 {
    let xb = x.lo().bits().max(x.hi().bits());
    (xb + q.bits() + 64) as u32
}

/// Enclosure of `||x q||`; `None` when the nearest integer is not determined.
pub fn norm_times(x: &DyadicInterval, q: &BigInt) -> Option<DyadicInterval> {
    let prec = product_prec(x, q);
    x.mul_int(q, prec).dist_to_nearest_int(prec)
}

/// `ceil` of an upper bound for `log(A q / eps) / log B`.
pub fn w_bound(a: &DyadicInterval, b: &DyadicInterval, q: &BigInt, eps: &DyadicInterval) -> Result<i64> {
    w_bound_with(a, &log_interval(b, W_PREC)?, q, eps)
}

fn w_bound_with(a: &DyadicInterval, ln_b: &DyadicInterval, q: &BigInt, eps: &DyadicInterval) -> Result<i64> {
    let ratio = a.mul_int(q, W_PREC).div(eps, W_PREC)?;
    let t = log_interval(&ratio, W_PREC)?.div(ln_b, W_PREC)?;
    let w = t.hi().ceil();
    i64::try_from(&w).map_err(|_| Error::Range(format!("w bound {w} does not fit in 64 bits")))
}

/// The part of a reduction that depends only on `tau`, its expansion and `M`:
/// the starting convergent and `M ||tau q||` for each convergent tried.
#[derive(Clone, Debug)]
pub struct Prepared {
    start: Option<usize>,
    scaled_tau_norms: Vec<Option<DyadicInterval>>,
}

impl Prepared {
    pub fn new(tau: &DyadicInterval, cf: &CFExpansion, m: &BigInt) -> Self {
        let start = cf.first_denominator_above(&(m * 6u32));
        let scaled_tau_norms = match start {
            None => Vec::new(),
            Some(s) => cf.convergents[s..cf.convergents.len().min(s + RETRY_CAP + 1)]
                .iter()
                .map(|(_, q)| {
                    let prec = product_prec(tau, q);
                    norm_times(tau, q).map(|d| d.mul_int(m, prec))
                })
                .collect(),
        };
        Prepared {
            start,
            scaled_tau_norms,
        }
    }
}

/// First convergent with `q > 6M` giving a certified positive `eps`, trying
/// at most [`RETRY_CAP`] further convergents.
pub fn dp_reduce(inst: &ReductionInstance, cf: &CFExpansion) -> Result<ReductionOutcome> {
    inst.validate()?;
    let prep = Prepared::new(&inst.tau, cf, &inst.m);
    dp_reduce_prepared(inst, cf, &prep, &log_interval(&inst.b, W_PREC)?)
}

/// [`dp_reduce`] with the `tau`-only work and `log B` supplied by the caller.
pub fn dp_reduce_prepared(
    inst: &ReductionInstance,
    cf: &CFExpansion,
    prep: &Prepared,
    ln_b: &DyadicInterval,
) -> Result<ReductionOutcome> {
    let start = prep.start.ok_or(Error::AmbiguousQuotient { certified: cf.len() })?;
    let mut uncertified = 0usize;
    let mut tried = 0usize;
    for r in 0..=RETRY_CAP {
        let idx = start + r;
        let (Some((_, q)), Some(tau_norm)) = (cf.convergents.get(idx), prep.scaled_tau_norms.get(r)) else {
            if uncertified > 0 || tried == 0 {
                return Err(Error::AmbiguousQuotient { certified: cf.len() });
            }
            return Err(Error::NoPositiveEpsilon { tries: tried });
        };
        tried += 1;
        let (Some(mu_q), Some(tau_q)) = (norm_times(&inst.mu, q), tau_norm) else {
            uncertified += 1;
            continue;
        };
        let prec = product_prec(&inst.mu, q);
        let eps = mu_q.sub(tau_q, prec);
        if eps.is_positive() {
            let w = w_bound_with(&inst.a, ln_b, q, &eps)?;
            return Ok(ReductionOutcome {
                q_used: q.clone(),
                convergent_index: idx,
                tries: tried,
                epsilon: eps.round(W_PREC),
                w_bound: w,
            });
        }
        if eps.contains_zero() && !eps.is_point() {
            uncertified += 1;
        }
    }
    if uncertified > 0 {
        Err(Error::PrecisionExhausted(format!(
            "{uncertified} of {tried} convergents gave undecided epsilon"
        )))
    } else {
        Err(Error::NoPositiveEpsilon { tries: tried })
    }
}
