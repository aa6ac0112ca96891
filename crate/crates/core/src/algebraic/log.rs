//! Natural logarithm enclosures.
//!
//! `x = y * 2^e` with `y` in `[1/sqrt 2, sqrt 2)`, then
//! `ln y = 2 atanh(s)` with `s = (y - 1)/(y + 1)`, `|s| < 0.172`. The series is
//! summed in interval arithmetic and the tail `sum_{i > N} s^(2i+1)/(2i+1)` is
//! bounded by `|s|^(2N+3) / (1 - s^2)` and added as a symmetric error term.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dyadic::{Dyadic, Rounding};
use super::interval::DyadicInterval;
use crate::error::{Error, Result};

fn guard_bits(prec: u32) -> u32 {
    prec + 24 + (32 - prec.leading_zeros())
}

/// `sum_{i >= 0} s^(2i+1) / (2i+1)` for `|s| <= 1/3`.
fn atanh_series(s: &DyadicInterval, wp: u32) -> DyadicInterval {
    let s2 = s.sqr(wp);
    let smag = s.mag();
    let target = -(wp as i64) - 4;
    let mut power = s.clone();
    let mut sum = DyadicInterval::zero();
    let mut i: u64 = 0;
    loop {
        let term = power
            .div(&DyadicInterval::from_int(2 * i + 1), wp)
            .expect("odd denominator is nonzero");
        sum = sum.add(&term, wp);
        power = power.mul(&s2, wp);
        i += 1;
        if power.is_point() && power.lo().is_zero() {
            break;
        }
        if power.mag().top() < target {
            break;
        }
    }
    // tail <= |s|^(2i+1) / (1 - s^2), with |power| >= |s|^(2i+1) after rounding
    let one = Dyadic::one();
    let s2_hi = smag.mul(&smag, wp, Rounding::Up);
    let denom = one.sub(&s2_hi, wp, Rounding::Down);
    let tail = power.mag().div(&denom, wp, Rounding::Up);
    let err = DyadicInterval::new(tail.neg(), tail).expect("symmetric");
    sum.add(&err, wp)
}

static LN2_CACHE: OnceLock<Mutex<HashMap<u32, DyadicInterval>>> = OnceLock::new();

/// Enclosure of `ln 2` with roughly `prec` correct bits.
pub fn ln2(prec: u32) -> DyadicInterval {
    let cache = LN2_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&prec) {
        return v.clone();
    }
    let wp = guard_bits(prec);
    let third = DyadicInterval::from_rational(&BigRational::new(1.into(), 3.into()), wp);
    let v = atanh_series(&third, wp).mul_pow2(1).round(prec);
    cache.lock().unwrap().insert(prec, v.clone());
    v
}

/// Enclosure of `ln x` for a positive dyadic point.
pub fn ln_point(x: &Dyadic, prec: u32) -> Result<DyadicInterval> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("logarithm of nonpositive value {x}")));
    }
    if *x == Dyadic::one() {
        return Ok(DyadicInterval::zero());
    }
    let wp = guard_bits(prec);
    let b = x.bits() as i64;
    let m = x.mantissa();
    // y = m / 2^b in [1/2, 1); lift to [1, 2) unless already >= 1/sqrt 2
    let (y, e) = if BigInt::from(2) * m * m < (BigInt::from(1) << (2 * b) as u64) {
        (Dyadic::new(m.clone(), 1 - b), x.exponent() + b - 1)
    } else {
        (Dyadic::new(m.clone(), -b), x.exponent() + b)
    };
    let yi = DyadicInterval::point(y);
    let one = DyadicInterval::one();
    let s = yi.sub(&one, wp).div(&yi.add(&one, wp), wp)?;
    let ln_y = atanh_series(&s, wp).mul_pow2(1);
    let result = if e == 0 {
        ln_y
    } else {
        ln_y.add(&ln2(wp).mul_int(&BigInt::from(e), wp), wp)
    };
    Ok(result.round(prec))
}

/// Enclosure of the natural logarithm over a positive interval.
pub fn log_interval(x: &DyadicInterval, prec: u32) -> Result<DyadicInterval> {
    if !x.is_positive() {
        return Err(Error::Domain(format!(
            "logarithm of interval {x} with nonpositive part"
        )));
    }
    if x.is_point() {
        return ln_point(x.lo(), prec);
    }
    let lo = ln_point(x.lo(), prec)?;
    let hi = ln_point(x.hi(), prec)?;
    DyadicInterval::new(lo.lo().clone(), hi.hi().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln2_digits() {
        let l = ln2(200);
        let expected = std::f64::consts::LN_2;
        assert!((l.to_f64() - expected).abs() < 1e-15);
        assert!(l.width() < Dyadic::pow2(-195));
    }

    #[test]
    fn ln_of_two_point() {
        let l = log_interval(&DyadicInterval::from_int(2), 128).unwrap();
        assert!(l.intersect(&ln2(128)).is_some());
        assert!(l.width() < Dyadic::pow2(-120));
    }

    #[test]
    fn ln_of_one_is_exact_zero() {
        let l = log_interval(&DyadicInterval::one(), 128).unwrap();
        assert!(l.is_point());
        assert!(l.lo().is_zero());
    }

    #[test]
    fn nonpositive_rejected() {
        assert!(log_interval(&DyadicInterval::zero(), 64).is_err());
        assert!(log_interval(&DyadicInterval::from_int(-3), 64).is_err());
    }

    #[test]
    fn ln_matches_f64_across_scales() {
        for &v in &[1e-30, 0.001, 0.3, 0.75, 1.4, 3.0, 10.0, 12345.678, 1e40] {
            let x = Dyadic::from_f64(v).unwrap();
            let l = ln_point(&x, 100).unwrap();
            assert!((l.to_f64() - v.ln()).abs() <= 1e-13 * v.ln().abs().max(1.0), "ln {v}");
            assert!(l.width() < Dyadic::pow2(-90));
        }
    }

    #[test]
    fn ln_of_ten_bracket_is_tight_and_correct() {
        // ln 10 = 2.302585092994045684017991454684364207601...
        let l = ln_point(&Dyadic::from_int(10), 300).unwrap();
        let lo = BigRational::new(
            BigInt::parse_bytes(b"2302585092994045684017991454684364207600", 10).unwrap(),
            num_traits::pow(BigInt::from(10), 39),
        );
        let hi = BigRational::new(
            BigInt::parse_bytes(b"2302585092994045684017991454684364207602", 10).unwrap(),
            num_traits::pow(BigInt::from(10), 39),
        );
        assert!(l.lo().to_rational() > lo && l.hi().to_rational() < hi);
    }
}
