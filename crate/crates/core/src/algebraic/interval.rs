use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dyadic::{Dyadic, Rounding};
use crate::error::{Error, Result};

use Rounding::{Down, Up};

/// Closed interval `[lo, hi]` with dyadic endpoints. Every operation rounds
/// outward, so the result encloses every exact result over the inputs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(DyadicInterval { lo, hi })
    }

    fn raw(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi);
        DyadicInterval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        DyadicInterval { lo: x.clone(), hi: x }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        DyadicInterval::point(Dyadic::from_int(v))
    }

    pub fn zero() -> Self {
        DyadicInterval::point(Dyadic::zero())
    }

    pub fn one() -> Self {
        DyadicInterval::point(Dyadic::one())
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        DyadicInterval::raw(Dyadic::from_rational(r, prec, Down), Dyadic::from_rational(r, prec, Up))
    }

    /// Enclosure of the decimal `mantissa * 10^exp10`.
    pub fn from_decimal(mantissa: i64, exp10: i32, prec: u32) -> Self {
        let ten = BigInt::from(10);
        let r = if exp10 >= 0 {
            BigRational::from_integer(BigInt::from(mantissa) * num_traits::pow(ten, exp10 as usize))
        } else {
            BigRational::new(BigInt::from(mantissa), num_traits::pow(ten, (-exp10) as usize))
        };
        DyadicInterval::from_rational(&r, prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn into_bounds(self) -> (Dyadic, Dyadic) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub_exact(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add_exact(&self.hi).mul_pow2(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        &self.lo.to_rational() <= x && x <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Certainly strictly less than `other` everywhere.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        if lo <= hi {
            Some(DyadicInterval::raw(lo, hi))
        } else {
            None
        }
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> Dyadic {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Outward rounding of both endpoints to `prec` bits.
    pub fn round(&self, prec: u32) -> Self {
        DyadicInterval::raw(self.lo.round(prec, Down), self.hi.round(prec, Up))
    }

    pub fn neg(&self) -> Self {
        DyadicInterval::raw(self.hi.neg(), self.lo.neg())
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            DyadicInterval::raw(Dyadic::zero(), self.mag())
        }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        DyadicInterval::raw(self.lo.add(&o.lo, prec, Down), self.hi.add(&o.hi, prec, Up))
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        DyadicInterval::raw(self.lo.sub(&o.hi, prec, Down), self.hi.sub(&o.lo, prec, Up))
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        if !self.lo.is_negative() && !o.lo.is_negative() {
            return DyadicInterval::raw(self.lo.mul(&o.lo, prec, Down), self.hi.mul(&o.hi, prec, Up));
        }
        let products = [
            self.lo.mul_exact(&o.lo),
            self.lo.mul_exact(&o.hi),
            self.hi.mul_exact(&o.lo),
            self.hi.mul_exact(&o.hi),
        ];
        let lo = products.iter().min().unwrap().round(prec, Down);
        let hi = products.iter().max().unwrap().round(prec, Up);
        DyadicInterval::raw(lo, hi)
    }

    pub fn sqr(&self, prec: u32) -> Self {
        let a = self.abs();
        DyadicInterval::raw(a.lo.mul(&a.lo, prec, Down), a.hi.mul(&a.hi, prec, Up))
    }

    pub fn mul_int(&self, k: &BigInt, prec: u32) -> Self {
        self.mul(&DyadicInterval::from_int(k.clone()), prec)
    }

    /// Exact scaling by `2^e`.
    pub fn mul_pow2(&self, e: i64) -> Self {
        DyadicInterval::raw(self.lo.mul_pow2(e), self.hi.mul_pow2(e))
    }

    pub fn div(&self, o: &Self, prec: u32) -> Result<Self> {
        if o.contains_zero() {
            return Err(Error::Domain("interval division by an interval containing zero".into()));
        }
        if !self.lo.is_negative() && o.lo.is_positive() {
            return Ok(DyadicInterval::raw(
                self.lo.div(&o.hi, prec, Down),
                self.hi.div(&o.lo, prec, Up),
            ));
        }
        let pairs = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let lo = pairs.iter().map(|(a, b)| a.div(b, prec, Down)).min().unwrap();
        let hi = pairs.iter().map(|(a, b)| a.div(b, prec, Up)).max().unwrap();
        Ok(DyadicInterval::raw(lo, hi))
    }

    pub fn recip(&self, prec: u32) -> Result<Self> {
        DyadicInterval::one().div(self, prec)
    }

    /// Integer power; negative exponents go through the reciprocal.
    pub fn powi(&self, n: i64, prec: u32) -> Result<Self> {
        if n < 0 {
            return self.powi(-n, prec)?.recip(prec);
        }
        let mut result = DyadicInterval::one();
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr(prec);
            }
        }
        Ok(result)
    }

    pub fn sqrt(&self, prec: u32) -> Result<Self> {
        if self.lo.is_negative() {
            return Err(Error::Domain("square root of an interval with negative part".into()));
        }
        Ok(DyadicInterval::raw(self.lo.sqrt(prec, Down), self.hi.sqrt(prec, Up)))
    }

    /// Hull of the two intervals.
    pub fn hull(&self, o: &Self) -> Self {
        DyadicInterval::raw((&self.lo).min(&o.lo).clone(), (&self.hi).max(&o.hi).clone())
    }

    /// `floor(x)` when it is the same integer across the whole interval.
    pub fn certified_floor(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        (a == self.hi.floor()).then_some(a)
    }

    /// Enclosure of the distance to the nearest integer, `||x||`. `None` when a
    /// half-integer lies in the interior so the nearest integer is not unique
    /// across the enclosure.
    pub fn dist_to_nearest_int(&self, prec: u32) -> Option<Self> {
        let half = Dyadic::pow2(-1);
        let shifted = DyadicInterval::raw(self.lo.add_exact(&half), self.hi.add_exact(&half));
        let nearest = shifted.certified_floor()?;
        let n = Dyadic::from_int(nearest);
        let diff = DyadicInterval::raw(self.lo.sub_exact(&n), self.hi.sub_exact(&n));
        Some(diff.abs().round(prec))
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(lo: i64, hi: i64) -> DyadicInterval {
        DyadicInterval::new(Dyadic::from_int(lo), Dyadic::from_int(hi)).unwrap()
    }

    #[test]
    fn rejects_reversed_bounds() {
        assert!(DyadicInterval::new(Dyadic::from_int(2), Dyadic::from_int(1)).is_err());
    }

    #[test]
    fn mixed_sign_product() {
        let p = iv(-2, 3).mul(&iv(-5, 1), 64);
        assert_eq!(p, iv(-15, 10));
    }

    #[test]
    fn division_by_zero_straddle_is_an_error() {
        assert!(iv(1, 2).div(&iv(-1, 1), 64).is_err());
    }

    #[test]
    fn nearest_integer_distance() {
        let x = DyadicInterval::from_rational(&BigRational::new(7.into(), 3.into()), 80);
        let d = x.dist_to_nearest_int(80).unwrap();
        assert!(d.contains_rational(&BigRational::new(1.into(), 3.into())));
        let x = DyadicInterval::from_rational(&BigRational::new((-11).into(), 4.into()), 80);
        let d = x.dist_to_nearest_int(80).unwrap();
        assert!(d.contains_rational(&BigRational::new(1.into(), 4.into())));
        // straddling one half is not certifiable
        let h = DyadicInterval::new(Dyadic::new(3.into(), -3), Dyadic::new(5.into(), -3)).unwrap();
        assert!(h.dist_to_nearest_int(80).is_none());
    }

    #[test]
    fn decimal_constant_encloses_value() {
        let c = DyadicInterval::from_decimal(28, 40, 128);
        let exact = BigRational::from_integer(BigInt::from(28) * num_traits::pow(BigInt::from(10), 40));
        assert!(c.contains_rational(&exact));
    }

    proptest! {
        #[test]
        fn dist_matches_exact_rational(num in -10_000i64..10_000, den in 1i64..500, q in 1i64..1_000_000) {
            let x = BigRational::new(num.into(), den.into());
            let xi = DyadicInterval::from_rational(&x, 200);
            let qx = xi.mul_int(&BigInt::from(q), 200);
            let exact = &x * BigRational::from_integer(q.into());
            let frac = &exact - exact.floor();
            let half = BigRational::new(1.into(), 2.into());
            let expect = if frac > half { BigRational::from_integer(1.into()) - frac } else { frac };
            if let Some(d) = qx.dist_to_nearest_int(200) {
                prop_assert!(d.contains_rational(&expect));
            }
        }

        #[test]
        fn powi_encloses_rational_power(num in 1i64..1000, den in 1i64..1000, n in -20i64..20) {
            let x = BigRational::new(num.into(), den.into());
            let xi = DyadicInterval::from_rational(&x, 96);
            let p = xi.powi(n, 96).unwrap();
            let exact = if n >= 0 {
                num_traits::pow(x.clone(), n as usize)
            } else {
                num_traits::pow(x.recip(), (-n) as usize)
            };
            prop_assert!(p.contains_rational(&exact));
        }
    }
}
