//! The dominant root `alpha(k)` of `Psi_k(x) = x^k - x^(k-1) - ... - x - 1`,
//! the coefficient `f_k(alpha)` of the Binet-like formula and the residual
//! `F_n - f_k(alpha) alpha^(n-1)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::dyadic::Dyadic;
use super::interval::DyadicInterval;
use super::log::{ln2, log_interval};
use crate::error::{Error, Result};

/// Exact `Psi_k(x)` by Horner's rule.
pub fn psi_eval(k: u32, x: &BigRational) -> BigRational {
    let one = BigRational::one();
    let mut p = one.clone();
    for _ in 0..k {
        p = p * x - &one;
    }
    p
}

/// Enclosure of `Psi_k` over an interval.
pub fn psi_interval(k: u32, x: &DyadicInterval, prec: u32) -> DyadicInterval {
    let one = DyadicInterval::one();
    let mut p = one.clone();
    for _ in 0..k {
        p = p.mul(x, prec).sub(&one, prec);
    }
    p
}

/// Sign of `Psi_k(x)` for a dyadic `x > 1`, from the exact integer
/// `2^(-e(k+1)) (x^k (x - 2) + 1)` where `x = m 2^e`. For `x > 1`,
/// `(x - 1) Psi_k(x) = x^k (x - 2) + 1`.
pub fn psi_sign_exact(k: u32, x: &Dyadic) -> Ordering {
    assert!(*x > Dyadic::one(), "exact sign test needs x > 1");
    let e = x.exponent();
    if e >= 0 {
        // integer x >= 2: x^k (x - 2) + 1 >= 1
        return Ordering::Greater;
    }
    let s = (-e) as u64;
    let m = x.mantissa();
    let v = num_traits::pow(m.clone(), k as usize) * (m - (BigInt::one() << (s + 1)))
        + (BigInt::one() << (s * (k as u64 + 1)));
    v.sign_ordering()
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

/// Sign of `x^k (x - 2) + 1` by interval evaluation, falling back to the
/// exact test when the enclosure contains zero.
fn psi_sign(k: u32, x: &Dyadic, wp: u32) -> Ordering {
    let xi = DyadicInterval::point(x.clone());
    let g = xi
        .powi(k as i64, wp)
        .expect("nonnegative exponent")
        .mul(&xi.sub(&DyadicInterval::from_int(2), wp), wp)
        .add(&DyadicInterval::one(), wp);
    if g.is_positive() {
        Ordering::Greater
    } else if g.is_negative() {
        Ordering::Less
    } else {
        psi_sign_exact(k, x)
    }
}

/// Certified enclosure of the dominant root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantRoot {
    pub k: u32,
    pub alpha: DyadicInterval,
    pub precision_bits: u32,
}

fn lower_bracket(k: u32) -> Dyadic {
    Dyadic::from_int(2).sub_exact(&Dyadic::pow2(1 - k as i64))
}

fn bit_length(v: u32) -> u32 {
    32 - v.leading_zeros()
}

/// Bisection on `(2(1 - 2^-k), 2)` down to width below `2^-precision_bits`.
pub fn dominant_root(k: u32, precision_bits: u32) -> Result<DominantRoot> {
    if k < 2 {
        return Err(Error::InvalidOrder { k, min: 2 });
    }
    if precision_bits < 16 {
        return Err(Error::Domain(format!(
            "precision {precision_bits} below the 16-bit minimum"
        )));
    }
    let bracket_lo = lower_bracket(k);
    let two = Dyadic::from_int(2);
    let target = Dyadic::pow2(-(precision_bits as i64));
    let wp = precision_bits + 2 * bit_length(k) + 48;
    let mut lo = bracket_lo.clone();
    let mut hi = two.clone();
    while hi.sub_exact(&lo) >= target || lo == bracket_lo || hi == two {
        let mid = lo.add_exact(&hi).mul_pow2(-1);
        match psi_sign(k, &mid, wp) {
            Ordering::Less => lo = mid,
            Ordering::Greater => hi = mid,
            Ordering::Equal => {
                return Err(Error::Domain(format!("Psi_{k} vanishes at the dyadic point {mid}")));
            }
        }
    }
    let root = DominantRoot {
        k,
        alpha: DyadicInterval::new(lo, hi)?,
        precision_bits,
    };
    root.certify()?;
    Ok(root)
}

impl DominantRoot {
    /// Rebuild from stored endpoints, re-checking every invariant exactly.
    pub fn from_parts(k: u32, alpha: DyadicInterval, precision_bits: u32) -> Result<Self> {
        let root = DominantRoot {
            k,
            alpha,
            precision_bits,
        };
        root.certify()?;
        Ok(root)
    }

    /// Exact check of the bracket, the sign change and the width.
    pub fn certify(&self) -> Result<()> {
        let (lo, hi) = (self.alpha.lo(), self.alpha.hi());
        if !(*lo > lower_bracket(self.k) && *hi < Dyadic::from_int(2)) {
            return Err(Error::Domain(format!(
                "root enclosure {} leaves (2(1-2^-k), 2)",
                self.alpha
            )));
        }
        if self.alpha.width() >= Dyadic::pow2(-(self.precision_bits as i64)) {
            return Err(Error::Precision(format!(
                "root enclosure wider than 2^-{}",
                self.precision_bits
            )));
        }
        if psi_sign_exact(self.k, lo) != Ordering::Less || psi_sign_exact(self.k, hi) != Ordering::Greater {
            return Err(Error::Domain(format!(
                "no certified sign change of Psi_{} on {}",
                self.k, self.alpha
            )));
        }
        Ok(())
    }

    fn wp(&self) -> u32 {
        self.precision_bits + 32
    }

    /// `f_k(alpha) = (alpha - 1) / (2 + (k + 1)(alpha - 2))`, certified in `(1/2, 3/4)`.
    pub fn f_k(&self) -> Result<DyadicInterval> {
        let wp = self.wp();
        // f_k is decreasing in z, so evaluate at both endpoints and take the hull
        let at = |z: &Dyadic| -> Result<DyadicInterval> {
            let zi = DyadicInterval::point(z.clone());
            let num = zi.sub(&DyadicInterval::one(), wp);
            let den = zi
                .sub(&DyadicInterval::from_int(2), wp)
                .mul_int(&BigInt::from(self.k + 1), wp)
                .add(&DyadicInterval::from_int(2), wp);
            num.div(&den, wp)
        };
        let f = at(self.alpha.hi())?.hull(&at(self.alpha.lo())?);
        let half = Dyadic::pow2(-1);
        let three_quarters = Dyadic::from_int(3).mul_pow2(-2);
        if *f.lo() > half && *f.hi() < three_quarters {
            Ok(f)
        } else {
            Err(Error::Precision(format!(
                "f_{}(alpha) enclosure {f} not certified inside (1/2, 3/4)",
                self.k
            )))
        }
    }

    pub fn ln_alpha(&self) -> Result<DyadicInterval> {
        log_interval(&self.alpha, self.wp())
    }

    /// `tau = ln alpha / ln 2`.
    pub fn tau(&self) -> Result<DyadicInterval> {
        let wp = self.wp();
        self.ln_alpha()?.div(&ln2(wp), wp)
    }

    pub fn power(&self, e: i64) -> DyadicInterval {
        self.alpha.powi(e, self.wp()).expect("alpha is positive")
    }

    /// Enclosure of `F_n - f_k(alpha) alpha^(n-1)`, certified inside `(-1/2, 1/2)`.
    pub fn binet_residual(&self, n: i64, fib: &BigInt) -> Result<DyadicInterval> {
        let wp = self.wp();
        let approx = self.f_k()?.mul(&self.power(n - 1), wp);
        let r = DyadicInterval::from_int(fib.clone()).sub(&approx, wp);
        let half = Dyadic::pow2(-1);
        if r.mag() < half {
            Ok(r)
        } else if *r.lo() >= half || *r.hi() <= half.neg() {
            Err(Error::Domain(format!(
                "residual {r} at k = {}, n = {n} is not below 1/2",
                self.k
            )))
        } else {
            Err(Error::Precision(format!(
                "residual {r} at k = {}, n = {n} straddles 1/2",
                self.k
            )))
        }
    }

    /// Certified truth value of `alpha^(n-2) <= F_n <= alpha^(n-1)`.
    pub fn dominance(&self, n: i64, fib: &BigInt) -> Result<bool> {
        let f = Dyadic::from_int(fib.clone());
        let lower = self.power(n - 2);
        let upper = self.power(n - 1);
        let lower_ok = if *lower.hi() <= f {
            true
        } else if *lower.lo() > f {
            false
        } else {
            return Err(Error::Precision(format!("alpha^{} vs F_{n} undecided", n - 2)));
        };
        let upper_ok = if *upper.lo() >= f {
            true
        } else if *upper.hi() < f {
            false
        } else {
            return Err(Error::Precision(format!("alpha^{} vs F_{n} undecided", n - 1)));
        };
        Ok(lower_ok && upper_ok)
    }
}

const MAX_DOUBLINGS: u32 = 5;

/// `f_k(alpha)` from a root computed at `precision_bits`.
pub fn f_k_value(k: u32, precision_bits: u32) -> Result<DyadicInterval> {
    dominant_root(k, precision_bits)?.f_k()
}

/// Residual of the Binet-like approximation, doubling the precision on
/// undecided comparisons.
pub fn binet_residual(k: u32, n: i64, precision_bits: u32) -> Result<DyadicInterval> {
    let fib = crate::kfib::kfib_term(k, n)?;
    let mut bits = precision_bits + n.max(0) as u32 + 32;
    let mut last = None;
    for _ in 0..=MAX_DOUBLINGS {
        match dominant_root(k, bits)?.binet_residual(n, &fib) {
            Err(e @ Error::Precision(_)) => last = Some(e),
            other => return other,
        }
        bits *= 2;
    }
    Err(Error::PrecisionExhausted(
        last.map(|e| e.to_string()).unwrap_or_default(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_eval(2, &q(2, 1)), q(1, 1));
        assert_eq!(psi_eval(4, &q(2, 1)), q(1, 1));
        assert!(psi_eval(4, &q(15, 8)) < BigRational::zero());
    }

    #[test]
    fn golden_ratio() {
        let r = dominant_root(2, 64).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r.alpha.to_f64() - phi).abs() < 1e-15);
        let f = r.f_k().unwrap();
        assert!((f.to_f64() - 0.723_606_797_749_979).abs() < 1e-14);
    }

    #[test]
    fn tetranacci_root() {
        let r = dominant_root(4, 64).unwrap();
        assert!((r.alpha.to_f64() - 1.927_561_975_482_925).abs() < 1e-14);
        assert!(*r.alpha.lo() > Dyadic::from_int(15).mul_pow2(-3));
        assert!(r.alpha.width() < Dyadic::pow2(-64));
        let f = r.f_k().unwrap();
        assert!((f.to_f64() - 0.56634).abs() < 1e-5);
    }

    #[test]
    fn tau_for_golden_ratio() {
        let r = dominant_root(2, 128).unwrap();
        assert!((r.tau().unwrap().to_f64() - 0.694_241_913_6).abs() < 1e-10);
    }

    #[test]
    fn residual_examples() {
        let r = binet_residual(4, 13, 64).unwrap();
        assert!((r.to_f64() - 0.022_68).abs() < 1e-4);
        assert!(binet_residual(4, 2, 64).unwrap().mag() < Dyadic::pow2(-1));
        assert!(binet_residual(10, 200, 64).unwrap().mag() < Dyadic::pow2(-1));
    }

    #[test]
    fn precision_doubling_nests() {
        let a = dominant_root(7, 80).unwrap();
        let b = dominant_root(7, 160).unwrap();
        assert!(b.alpha.is_subset_of(&a.alpha));
        assert!(b.f_k().unwrap().is_subset_of(&a.f_k().unwrap()));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(dominant_root(1, 64).is_err());
        assert!(dominant_root(4, 8).is_err());
    }

    #[test]
    fn tampered_parts_rejected() {
        let r = dominant_root(5, 64).unwrap();
        let shifted = DyadicInterval::new(r.alpha.hi().clone(), r.alpha.hi().add_exact(&Dyadic::pow2(-70))).unwrap();
        assert!(DominantRoot::from_parts(5, shifted, 64).is_err());
        assert!(DominantRoot::from_parts(5, r.alpha.clone(), 64).is_ok());
    }

    proptest! {
        #[test]
        fn psi_enclosure_sound(k in 2u32..12, num in -400i64..400, den in 1i64..97) {
            let x = q(num, den);
            let xi = DyadicInterval::from_rational(&x, 96);
            let enc = psi_interval(k, &xi, 96);
            prop_assert!(enc.contains_rational(&psi_eval(k, &x)));
        }

        #[test]
        fn exact_sign_matches_rational(k in 2u32..10, num in 1025i64..2048) {
            let x = Dyadic::new(num.into(), -10);
            let r = psi_eval(k, &x.to_rational());
            prop_assert_eq!(psi_sign_exact(k, &x), r.cmp(&BigRational::zero()));
        }
    }
}
