//! Dyadic rationals `m * 2^e` with directed rounding to a bit precision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for a single operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

impl Rounding {
    pub fn flip(self) -> Self {
        match self {
            Rounding::Down => Rounding::Up,
            Rounding::Up => Rounding::Down,
        }
    }
}

/// The number `mantissa * 2^exponent`, kept with an odd mantissa (or zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        let mut d = Dyadic { mantissa, exponent };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        match self.mantissa.trailing_zeros() {
            None => self.exponent = 0,
            Some(0) => {}
            Some(tz) => {
                self.mantissa >>= tz;
                self.exponent += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: 0,
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// `2^e` exactly.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: e,
        }
    }

    /// Exact conversion; `None` for NaN and infinities.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::new(BigInt::from(m) * sign, e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.sign() == Sign::Plus
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.sign() == Sign::Minus
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.mantissa.bits()
    }

    /// Smallest `t` with `|self| < 2^t`. Meaningless for zero.
    pub fn top(&self) -> i64 {
        self.exponent + self.mantissa.bits() as i64
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// Exact multiplication by `2^e`.
    pub fn mul_pow2(&self, e: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + e,
        }
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, dir: Rounding) -> Self {
        let bits = self.mantissa.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let m = shift_right(&self.mantissa, shift, dir);
        Dyadic::new(m, self.exponent + shift as i64)
    }

    pub fn add_exact(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub_exact(&self, other: &Self) -> Self {
        self.add_exact(&other.neg())
    }

    pub fn mul_exact(&self, other: &Self) -> Self {
        Dyadic::new(&self.mantissa * &other.mantissa, self.exponent + other.exponent)
    }

    /// Directed-rounded sum. An operand far below the precision of the other is
    /// replaced by zero or by a one-sided sticky term, so exponent gaps never
    /// produce huge intermediate mantissas.
    pub fn add(&self, other: &Self, prec: u32, dir: Rounding) -> Self {
        if self.is_zero() {
            return other.round(prec, dir);
        }
        if other.is_zero() {
            return self.round(prec, dir);
        }
        let (big, small) = if self.top() >= other.top() {
            (self, other)
        } else {
            (other, self)
        };
        let limit = big.top() - prec as i64 - 2;
        if small.top() <= limit {
            let sticky = Dyadic::pow2(limit);
            return match (dir, small.is_positive()) {
                (Rounding::Down, true) | (Rounding::Up, false) => big.round(prec, dir),
                (Rounding::Down, false) => big.sub_exact(&sticky).round(prec, dir),
                (Rounding::Up, true) => big.add_exact(&sticky).round(prec, dir),
            };
        }
        self.add_exact(other).round(prec, dir)
    }

    pub fn sub(&self, other: &Self, prec: u32, dir: Rounding) -> Self {
        self.add(&other.neg(), prec, dir)
    }

    pub fn mul(&self, other: &Self, prec: u32, dir: Rounding) -> Self {
        self.mul_exact(other).round(prec, dir)
    }

    /// Directed-rounded quotient. Panics on division by zero.
    pub fn div(&self, other: &Self, prec: u32, dir: Rounding) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let negative = self.is_negative() != other.is_negative();
        let na = self.mantissa.magnitude();
        let nb = other.mantissa.magnitude();
        let want = prec as i64 + 2 + nb.bits() as i64 - na.bits() as i64;
        let shift = want.max(0) as u64;
        let scaled = na << shift;
        let (mut q, r) = num_integer::Integer::div_rem(&scaled, nb);
        let inexact = !r.is_zero();
        // magnitude rounding: away from zero when the signed result must move outward
        let away = matches!((dir, negative), (Rounding::Up, false) | (Rounding::Down, true));
        if inexact && away {
            q += 1u32;
        }
        let m = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, q);
        Dyadic::new(m, self.exponent - other.exponent - shift as i64).round(prec, dir)
    }

    /// Directed-rounded square root of a nonnegative value.
    pub fn sqrt(&self, prec: u32, dir: Rounding) -> Self {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let bits = self.mantissa.bits() as i64;
        let mut shift = (2 * prec as i64 + 4 - bits).max(0);
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled = &self.mantissa << shift as u64;
        let mut r = scaled.sqrt();
        if dir == Rounding::Up && &r * &r != scaled {
            r += 1;
        }
        Dyadic::new(r, (self.exponent - shift) / 2).round(prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            shift_right(&self.mantissa, (-self.exponent) as u64, Rounding::Down)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(self.mantissa.clone(), BigInt::one() << (-self.exponent) as u64)
        }
    }

    pub fn from_rational(r: &BigRational, prec: u32, dir: Rounding) -> Self {
        Dyadic::from_int(r.numer().clone()).div(&Dyadic::from_int(r.denom().clone()), prec, dir)
    }

    /// Nearest-ish `f64`; display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(60, Rounding::Down);
        let m = r.mantissa.to_f64().unwrap_or(f64::NAN);
        let e = r.exponent.clamp(-2000, 2000) as i32;
        if e < -1000 {
            m * 2f64.powi(-1000) * 2f64.powi(e + 1000)
        } else if e > 1000 {
            m * 2f64.powi(1000) * 2f64.powi(e - 1000)
        } else {
            m * 2f64.powi(e)
        }
    }

    /// Decimal scientific rendering with `digits` significant digits (truncated).
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let r = self.to_rational();
        let neg = r.is_negative();
        let r = r.abs();
        // find decimal exponent d with 10^d <= r < 10^(d+1)
        let ten = BigRational::from_integer(BigInt::from(10));
        let approx = (self.top() as f64 - 1.0) * std::f64::consts::LOG10_2;
        let mut d = approx.floor() as i64;
        let pow = |e: i64| -> BigRational {
            if e >= 0 {
                BigRational::from_integer(num_traits::pow(BigInt::from(10), e as usize))
            } else {
                BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), (-e) as usize))
            }
        };
        while pow(d) > r {
            d -= 1;
        }
        while pow(d + 1) <= r {
            d += 1;
        }
        let scaled = &r / pow(d) * num_traits::pow(ten, digits.saturating_sub(1));
        let s = scaled.to_integer().to_string();
        let (head, tail) = s.split_at(1);
        let sign = if neg { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{d}")
        } else {
            format!("{sign}{head}.{tail}e{d}")
        }
    }
}

fn shift_right(m: &BigInt, shift: u64, dir: Rounding) -> BigInt {
    match dir {
        Rounding::Down => floor_shift(m, shift),
        Rounding::Up => -floor_shift(&-m, shift),
    }
}

fn floor_shift(m: &BigInt, shift: u64) -> BigInt {
    if m.is_negative() {
        // -((|m| - 1) >> s) - 1 == floor(m / 2^s)
        let t: BigInt = (-m - 1u32) >> shift;
        -t - 1u32
    } else {
        m >> shift
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let mag = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let e = self.exponent.min(other.exponent);
                let a = self.mantissa.magnitude() << (self.exponent - e) as u64;
                let b = other.mantissa.magnitude() << (other.exponent - e) as u64;
                a.cmp(&b)
            }
            o => o,
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(12))
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        let x = d(12, 0);
        assert_eq!(x.mantissa(), &BigInt::from(3));
        assert_eq!(x.exponent(), 2);
        assert_eq!(d(0, 17), Dyadic::zero());
    }

    #[test]
    fn floor_of_negative_values() {
        assert_eq!(d(-3, -1).floor(), BigInt::from(-2));
        assert_eq!(d(-3, -1).ceil(), BigInt::from(-1));
        assert_eq!(d(5, -1).floor(), BigInt::from(2));
        assert_eq!(d(-4, 0).floor(), BigInt::from(-4));
    }

    #[test]
    fn directed_rounding_brackets() {
        let x = d(0b1011011, 0);
        assert_eq!(x.round(3, Rounding::Down), d(0b101, 4));
        assert_eq!(x.round(3, Rounding::Up), d(0b110, 4));
        let y = x.neg();
        assert_eq!(y.round(3, Rounding::Down), d(-0b110, 4));
        assert_eq!(y.round(3, Rounding::Up), d(-0b101, 4));
    }

    #[test]
    fn sqrt_two_bracket() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(64, Rounding::Down);
        let hi = two.sqrt(64, Rounding::Up);
        assert!(lo.mul_exact(&lo) < two);
        assert!(hi.mul_exact(&hi) > two);
        assert!(hi.sub_exact(&lo) <= Dyadic::pow2(-62));
    }

    #[test]
    fn sci_string() {
        assert_eq!(Dyadic::from_int(1234567).to_sci_string(3), "1.23e6");
        assert_eq!(d(-1, -1).to_sci_string(2), "-5.0e-1");
    }

    #[test]
    fn add_with_tiny_operand_stays_directed() {
        let big = Dyadic::one();
        let tiny = Dyadic::pow2(-500);
        let down = big.add(&tiny, 53, Rounding::Down);
        let up = big.add(&tiny, 53, Rounding::Up);
        let exact = big.add_exact(&tiny);
        assert!(down <= exact && exact <= up);
        let down = big.add(&tiny.neg(), 53, Rounding::Down);
        let up = big.add(&tiny.neg(), 53, Rounding::Up);
        let exact = big.sub_exact(&tiny);
        assert!(down <= exact && exact <= up);
    }

    proptest! {
        #[test]
        fn ops_bracket_exact_rationals(a in -1_000_000i64..1_000_000, ea in -40i64..40,
                                       b in -1_000_000i64..1_000_000, eb in -40i64..40,
                                       prec in 2u32..40) {
            let x = d(a, ea);
            let y = d(b, eb);
            let sum = x.add_exact(&y);
            prop_assert!(x.add(&y, prec, Rounding::Down) <= sum);
            prop_assert!(x.add(&y, prec, Rounding::Up) >= sum);
            let prod = x.mul_exact(&y);
            prop_assert!(x.mul(&y, prec, Rounding::Down) <= prod);
            prop_assert!(x.mul(&y, prec, Rounding::Up) >= prod);
            if b != 0 {
                let q = x.to_rational() / y.to_rational();
                prop_assert!(x.div(&y, prec, Rounding::Down).to_rational() <= q);
                prop_assert!(x.div(&y, prec, Rounding::Up).to_rational() >= q);
            }
            prop_assert_eq!(x.cmp(&y), x.to_rational().cmp(&y.to_rational()));
            let f = x.floor();
            prop_assert!(BigRational::from_integer(f.clone()) <= x.to_rational());
            prop_assert!(BigRational::from_integer(f + 1) > x.to_rational());
        }
    }
}
