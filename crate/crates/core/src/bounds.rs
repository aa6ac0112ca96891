//! Upper bounds from linear forms in logarithms.
//!
//! Every quantity is an outward-rounded enclosure; an upper bound is always
//! read from the `hi` end and a lower bound from the `lo` end. Logarithms are
//! natural logarithms throughout.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::algebraic::{dominant_root, ln2, log_interval, Dyadic, DyadicInterval};
use crate::error::{Error, Result};

const PREC: u32 = 160;

fn dec(mantissa: i64, exp10: i32) -> DyadicInterval {
    DyadicInterval::from_decimal(mantissa, exp10, PREC)
}

fn int(v: impl Into<BigInt>) -> DyadicInterval {
    DyadicInterval::from_int(v)
}

fn ln(x: &DyadicInterval) -> Result<DyadicInterval> {
    log_interval(x, PREC)
}

/// Data for the lower bound on `log |gamma_1^b_1 ... gamma_t^b_t - 1|`.
#[derive(Clone, Debug)]
pub struct MatveevInputs {
    pub t: u32,
    pub d: u64,
    pub b: BigInt,
    pub a: Vec<DyadicInterval>,
}

impl MatveevInputs {
    pub fn validate(&self) -> Result<()> {
        if self.t < 1 || self.d < 1 {
            return Err(Error::Domain(format!(
                "need t >= 1 and D >= 1 (t = {}, D = {})",
                self.t, self.d
            )));
        }
        if self.a.len() != self.t as usize {
            return Err(Error::Domain(format!(
                "{} height parameters for t = {}",
                self.a.len(),
                self.t
            )));
        }
        if self.b < BigInt::one() {
            return Err(Error::Domain(format!("B = {} must be at least 1", self.b)));
        }
        let floor = dec(16, -2);
        if let Some(bad) = self.a.iter().find(|a| a.hi() < floor.lo()) {
            return Err(Error::Domain(format!("height parameter {bad} below 0.16")));
        }
        Ok(())
    }
}

/// `1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D)`, times the `A_i`, without the `(1 + log B)` factor.
fn matveev_prefactor(t: u32, d: u64, a: &[DyadicInterval]) -> Result<DyadicInterval> {
    let t_i = int(t);
    let t_pow = t_i.powi(4, PREC)?.mul(&t_i.sqrt(PREC)?, PREC);
    let d_i = int(d);
    let mut c = dec(14, -1)
        .mul(&int(30).powi(t as i64 + 3, PREC)?, PREC)
        .mul(&t_pow, PREC)
        .mul(&d_i.sqr(PREC), PREC)
        .mul(&DyadicInterval::one().add(&ln(&d_i)?, PREC), PREC);
    for ai in a {
        c = c.mul(ai, PREC);
    }
    Ok(c)
}

fn matveev_constant_at(
    t: u32,
    d: u64,
    one_plus_log_b: &DyadicInterval,
    a: &[DyadicInterval],
) -> Result<DyadicInterval> {
    Ok(matveev_prefactor(t, d, a)?.mul(one_plus_log_b, PREC))
}

/// Positive constant `C` with `log |Lambda| > -C`.
pub fn matveev_constant(inputs: &MatveevInputs) -> Result<DyadicInterval> {
    inputs.validate()?;
    let lb = DyadicInterval::one().add(&ln(&int(inputs.b.clone()))?, PREC);
    matveev_constant_at(inputs.t, inputs.d, &lb, &inputs.a)
}

/// Certified lower bound on `log |Lambda|` (already rounded toward minus infinity).
pub fn matveev_lower_bound(inputs: &MatveevInputs) -> Result<Dyadic> {
    Ok(matveev_constant(inputs)?.hi().neg())
}

/// Stage values of the chain `Lambda -> Lambda_1 / Lambda_2 -> Lambda_3`,
/// all as functions of `L = 1 + log B`.
struct Stages {
    min_bound: DyadicInterval,
    max_bound: DyadicInterval,
    c3: DyadicInterval,
}

struct KConstants {
    k: u32,
    ln_alpha: DyadicInterval,
    ln_k: DyadicInterval,
    ln2: DyadicInterval,
}

impl KConstants {
    fn new(k: u32) -> Result<Self> {
        let root = dominant_root(k, PREC)?;
        Ok(KConstants {
            k,
            ln_alpha: log_interval(&root.alpha, PREC)?,
            ln_k: ln(&int(k))?,
            ln2: ln2(PREC),
        })
    }

    fn stages(&self, l: &DyadicInterval) -> Result<Stages> {
        let k = int(self.k);
        let d = self.k as u64;
        let a2 = self.ln2.clone();
        let a3 = k.mul(&self.ln2, PREC);
        let three_k_ln_k = int(3).mul(&k, PREC).mul(&self.ln_k, PREC);
        let six_ln_alpha = int(6).mul(&self.ln_alpha, PREC);

        let c1 = matveev_constant_at(3, d, l, &[three_k_ln_k.clone(), a2.clone(), a3.clone()])?;
        // (n - n1 - 6) log alpha or (m - m1 - 1) log 2 is below c1
        let min_bound = c1.add(&six_ln_alpha, PREC);

        // k h(gamma_1) < 3k log k + k log 2 + (n - n1) log alpha, or the same with (m - m1) log 2
        let a1 = three_k_ln_k.add(&a3, PREC).add(&min_bound, PREC);
        let c2 = matveev_constant_at(3, d, l, &[a1, a2.clone(), a3.clone()])?;
        let max_bound = c2.add(&six_ln_alpha, PREC);

        // k h(gamma_1) < 3k log k + (n - n1) log alpha + k (m - m1) log 2 + 2k log 2
        let a1 = three_k_ln_k
            .add(&int(self.k + 1).mul(&max_bound, PREC), PREC)
            .add(&int(2).mul(&a3, PREC), PREC);
        let c3 = matveev_constant_at(3, d, l, &[a1, a2, a3])?;
        Ok(Stages {
            min_bound,
            max_bound,
            c3,
        })
    }
}

/// Smallest `n` the chain is run for; below it nothing needs bounding.
pub const N_FLOOR: i64 = 1601;

/// Audit trail of the bound chain for one `k`.
#[derive(Clone, Debug)]
pub struct BoundChain {
    pub k: u32,
    /// Value of `B = n` the first two stages were finally evaluated at.
    pub b_used: BigInt,
    /// Upper bound on `min{(n - n1) log alpha, (m - m1) log 2}`.
    pub min_bound: DyadicInterval,
    /// Upper bound on `max{(n - n1) log alpha, (m - m1) log 2}`.
    pub max_bound: DyadicInterval,
    /// `A` with `n / log^3 n < A` from the last stage.
    pub closure_a: DyadicInterval,
    /// `16 A log^3 A`, rounded up.
    pub chain_n_bound: BigInt,
    /// `floor(2.8e41 k^11 log^7 k)`.
    pub final_n_bound: BigInt,
    pub stated_min_bound: DyadicInterval,
    pub binding_min_bound: DyadicInterval,
    pub stated_max_bound: DyadicInterval,
    pub stated_closure_a: DyadicInterval,
    pub cutoff_satisfied: bool,
}

fn ceil_hi(x: &DyadicInterval) -> BigInt {
    x.hi().ceil()
}

/// Three-stage chain ending in `n / log^3 n < A`, closed with `x < 16 A log^3 A`.
///
/// The first two stages are evaluated at `B = n_hypothesis`; when the closed
/// bound exceeds that hypothesis they are evaluated once more at the bound.
pub fn baker_chain(k: u32, n_hypothesis: &BigInt) -> Result<BoundChain> {
    if k < 4 {
        return Err(Error::InvalidOrder { k, min: 4 });
    }
    let kc = KConstants::new(k)?;
    let one = DyadicInterval::one();
    let l_at = |b: &BigInt| -> Result<DyadicInterval> { Ok(one.add(&ln(&int(b.clone()))?, PREC)) };

    // closure: C3 is a cubic in L with nonnegative coefficients, so for
    // L >= L0 it is at most C3(L0) (L / L0)^3; and 1 + log n <= rho log n.
    let n0 = BigInt::from(N_FLOOR);
    let ln_n0 = ln(&int(n0.clone()))?;
    let l0 = one.add(&ln_n0, PREC);
    let c3 = kc.stages(&l0)?.c3;
    let l0_cubed = l0.powi(3, PREC)?;
    let kappa = c3.div(&dec(8, -1).mul(&kc.ln2, PREC).mul(&l0_cubed, PREC), PREC)?;
    let rho_cubed = l0_cubed.div(&ln_n0.powi(3, PREC)?, PREC)?;
    // n < (C3 / log 2 + 5) / 0.8 = kappa L^3 + 6.25
    let closure_a = kappa
        .mul(&rho_cubed, PREC)
        .add(&dec(625, -2).div(&ln_n0.powi(3, PREC)?, PREC)?, PREC);
    if closure_a.lo() < dec(1, 30).hi() {
        return Err(Error::Domain(format!("closure needs A >= 1e30, got {closure_a}")));
    }
    let closed = int(16).mul(&closure_a, PREC).mul(&ln(&closure_a)?.powi(3, PREC)?, PREC);
    let chain_n_bound = ceil_hi(&closed).max(n0);

    let mut b_used = n_hypothesis.clone().max(BigInt::one());
    let mut st = kc.stages(&l_at(&b_used)?)?;
    if b_used < chain_n_bound {
        b_used = chain_n_bound.clone();
        st = kc.stages(&l_at(&b_used)?)?;
    }

    let kk = int(k);
    let lb = l_at(&b_used)?;
    let k4_lk2_l = kk.powi(4, PREC)?.mul(&kc.ln_k.sqr(PREC), PREC).mul(&lb, PREC);
    let stated_min_bound = dec(42, 10).mul(&k4_lk2_l, PREC);
    let binding_min_bound = dec(425, 9).mul(&k4_lk2_l, PREC);
    let stated_max_bound = dec(42, 21)
        .mul(&kk.powi(7, PREC)?, PREC)
        .mul(&kc.ln_k.powi(3, PREC)?, PREC)
        .mul(&lb.sqr(PREC), PREC);
    let stated_closure_a = dec(51, 33)
        .mul(&kk.powi(11, PREC)?, PREC)
        .mul(&kc.ln_k.powi(4, PREC)?, PREC);
    let final_n_bound = lemma_bound(k)?;
    let cutoff_satisfied = hyp_holds(k, &final_n_bound);
    Ok(BoundChain {
        k,
        b_used,
        min_bound: st.min_bound,
        max_bound: st.max_bound,
        closure_a,
        chain_n_bound,
        final_n_bound,
        stated_min_bound,
        binding_min_bound,
        stated_max_bound,
        stated_closure_a,
        cutoff_satisfied,
    })
}

/// `floor(2.8e41 k^11 log^7 k)`, the absolute bound on `n`.
pub fn lemma_bound(k: u32) -> Result<BigInt> {
    let mut prec = PREC;
    for _ in 0..6 {
        let kk = DyadicInterval::from_int(k);
        let lk = log_interval(&kk, prec)?;
        let v = DyadicInterval::from_decimal(28, 40, prec)
            .mul(&kk.powi(11, prec)?, prec)
            .mul(&lk.powi(7, prec)?, prec);
        if let Some(f) = v.certified_floor() {
            return Ok(f);
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted(format!("floor of the bound at k = {k}")))
}

/// Exact `n^3 < 2^(k-5)`; false for `k < 5`.
pub fn hyp_holds(k: u32, n: &BigInt) -> bool {
    if k < 5 {
        return false;
    }
    let n = n.abs();
    n.pow(3) < (BigInt::one() << (k - 5) as u64)
}

/// Certified truth value of `2.8^3 * 10^123 * k^33 * (log k)^21 < 2^k`, compared in logarithms.
pub fn cutoff_inequality(k: u32) -> Result<bool> {
    cutoff_inequality_shifted(k, 0)
}

/// Same comparison against `2^(k - shift)`.
pub fn cutoff_inequality_shifted(k: u32, shift: u32) -> Result<bool> {
    if k < 3 {
        return Err(Error::Domain(format!("log log k undefined or negative at k = {k}")));
    }
    let mut prec = PREC;
    for _ in 0..6 {
        let l = |x: &DyadicInterval| log_interval(x, prec);
        let kk = DyadicInterval::from_int(k);
        let lk = l(&kk)?;
        let lhs = int(3)
            .mul(&l(&DyadicInterval::from_decimal(28, -1, prec))?, prec)
            .add(&int(123).mul(&l(&int(10))?, prec), prec)
            .add(&int(33).mul(&lk, prec), prec)
            .add(&int(21).mul(&l(&lk)?, prec), prec);
        let rhs = int(k as i64 - shift as i64).mul(&ln2(prec), prec);
        if lhs.certainly_lt(&rhs) {
            return Ok(true);
        }
        if rhs.hi() <= lhs.lo() {
            return Ok(false);
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted(format!("cutoff comparison at k = {k}")))
}

/// Minimal `k >= 4` satisfying [`cutoff_inequality`].
pub fn cutoff_k() -> Result<u32> {
    first_true(cutoff_inequality)
}

/// Minimal `k >= 5` with `hyp_holds(k, lemma_bound(k))`.
pub fn hyp_cutoff_k() -> Result<u32> {
    first_true(|k| Ok(k >= 5 && hyp_holds(k, &lemma_bound(k)?)))
}

fn first_true(mut p: impl FnMut(u32) -> Result<bool>) -> Result<u32> {
    for k in 4..100_000 {
        if p(k)? {
            return Ok(k);
        }
    }
    Err(Error::Range("no k below 100000 satisfies the inequality".into()))
}

/// JSON-facing summary of a [`BoundChain`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BoundReport {
    pub k: u32,
    pub min_bound: String,
    pub max_bound: String,
    pub final_n_bound: String,
    pub cutoff_satisfied: bool,
    pub b_used: String,
    pub chain_n_bound: String,
    pub closure_a: String,
    pub stated_min_bound_4_2e11: String,
    pub binding_min_bound_4_25e11: String,
    pub stated_max_bound: String,
    pub stated_closure_a: String,
}

impl BoundChain {
    pub fn report(&self) -> BoundReport {
        let up = |x: &DyadicInterval| x.hi().to_sci_string(8);
        BoundReport {
            k: self.k,
            min_bound: up(&self.min_bound),
            max_bound: up(&self.max_bound),
            final_n_bound: self.final_n_bound.to_string(),
            cutoff_satisfied: self.cutoff_satisfied,
            b_used: self.b_used.to_string(),
            chain_n_bound: self.chain_n_bound.to_string(),
            closure_a: up(&self.closure_a),
            stated_min_bound_4_2e11: up(&self.stated_min_bound),
            binding_min_bound_4_25e11: up(&self.binding_min_bound),
            stated_max_bound: up(&self.stated_max_bound),
            stated_closure_a: up(&self.stated_closure_a),
        }
    }

    /// `min <= max` and the chain closure does not exceed the absolute bound.
    pub fn consistent(&self) -> bool {
        self.min_bound.hi() <= self.max_bound.hi() && self.chain_n_bound <= self.final_n_bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_matveev() {
        let inputs = MatveevInputs {
            t: 1,
            d: 1,
            b: BigInt::one(),
            a: vec![dec(16, -2)],
        };
        let lb = matveev_lower_bound(&inputs).unwrap().to_f64();
        let expected = -1.4 * 30f64.powi(4) * 0.16;
        assert!((lb - expected).abs() < 1e-9 * expected.abs());
        assert!(lb <= expected);
    }

    #[test]
    fn matveev_rejects_small_heights() {
        let inputs = MatveevInputs {
            t: 1,
            d: 1,
            b: BigInt::one(),
            a: vec![dec(1, -2)],
        };
        assert!(matveev_lower_bound(&inputs).is_err());
        let inputs = MatveevInputs {
            t: 2,
            d: 1,
            b: BigInt::one(),
            a: vec![dec(1, 0)],
        };
        assert!(matveev_lower_bound(&inputs).is_err());
    }

    #[test]
    fn first_stage_shape() {
        // 1.4 * 30^6 * 3^4.5 * k^4 (1 + log k)(1 + log n)(3 log k)(log 2)^2 vs 4.2e11 k^4 log^2 k (1 + log n)
        for k in [4u32, 10, 100, 790] {
            let kf = k as f64;
            let n = 1600f64;
            let direct = 1.4
                * 30f64.powi(6)
                * 3f64.powf(4.5)
                * kf.powi(4)
                * (1.0 + kf.ln())
                * (1.0 + n.ln())
                * 3.0
                * kf.ln()
                * 2f64.ln().powi(2);
            let inputs = MatveevInputs {
                t: 3,
                d: k as u64,
                b: BigInt::from(1600),
                a: vec![
                    int(3 * k).mul(&ln(&int(k)).unwrap(), PREC),
                    ln2(PREC),
                    int(k).mul(&ln2(PREC), PREC),
                ],
            };
            let c = matveev_constant(&inputs).unwrap().to_f64();
            assert!((c - direct).abs() < 1e-12 * direct);
            let shape = 4.2e11 * kf.powi(4) * kf.ln().powi(2) * (1.0 + n.ln());
            assert!(c / shape > 0.3 && c / shape < 2.5, "k={k} ratio {}", c / shape);
        }
    }

    #[test]
    fn lemma_bound_k4() {
        let m = lemma_bound(4).unwrap();
        let f = 2.8e41 * 4f64.powi(11) * 4f64.ln().powi(7);
        let mf: f64 = m.to_string().parse().unwrap();
        assert!((mf - f).abs() < 1e-12 * f);
        assert!(lemma_bound(5).unwrap() > m);
    }

    #[test]
    fn hyp_examples() {
        assert!(hyp_holds(50, &BigInt::from(1000)));
        assert!(!hyp_holds(35, &BigInt::from(1024)));
        assert!(!hyp_holds(4, &BigInt::from(0)));
        assert!(hyp_holds(5, &BigInt::from(0)));
    }

    #[test]
    fn cutoff_sides() {
        assert!(cutoff_inequality(1000).unwrap());
        assert!(!cutoff_inequality(700).unwrap());
        assert!(!cutoff_inequality(4).unwrap());
    }

    #[test]
    fn chain_k4_is_consistent() {
        let c = baker_chain(4, &BigInt::from(1600)).unwrap();
        assert!(c.consistent());
        assert!(c.chain_n_bound > BigInt::from(N_FLOOR));
        assert!(c.b_used >= c.chain_n_bound);
        let r = c.report();
        assert_eq!(r.final_n_bound, c.final_n_bound.to_string());
        assert!(!r.cutoff_satisfied);
    }
}
