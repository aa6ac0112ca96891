//! Continued fractions certified over an enclosure.
//!
//! Euclid's algorithm runs on both endpoints at once. A partial quotient is
//! kept only when both endpoints produce it, which makes it the quotient of
//! every real number in between.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebraic::DyadicInterval;
use crate::error::{Error, Result};

/// Why the expansion stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CfStop {
    /// Reached the requested number of quotients.
    Limit,
    /// The enclosure no longer determines the next quotient.
    Ambiguous,
    /// The input is a rational point and its expansion is complete.
    Terminated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFExpansion {
    pub lower: BigRational,
    pub upper: BigRational,
    pub quotients: Vec<BigInt>,
    /// `(p_i, q_i)` for each certified quotient.
    pub convergents: Vec<(BigInt, BigInt)>,
    pub stop: CfStop,
}

struct Euclid {
    num: BigInt,
    den: BigInt,
}

impl Euclid {
    fn new(r: &BigRational) -> Self {
        Euclid {
            num: r.numer().clone(),
            den: r.denom().clone(),
        }
    }

    fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    /// Replace `x` by `1 / (x - a)`; needs `x > a`.
    fn step(&mut self, a: &BigInt) {
        let rem = &self.num - a * &self.den;
        self.num = std::mem::replace(&mut self.den, rem);
    }

    fn is_integer(&self, a: &BigInt) -> bool {
        self.num == a * &self.den
    }
}

/// Expansion of every real in `[lower, upper]`, up to `max_quotients` terms.
pub fn cf_expand_bounds(lower: &BigRational, upper: &BigRational, max_quotients: usize) -> Result<CFExpansion> {
    if lower > upper {
        return Err(Error::Domain(format!("empty enclosure [{lower}, {upper}]")));
    }
    let point = lower == upper;
    // (lo, hi) track the complete quotient's range; the order flips each step
    let mut lo = Euclid::new(lower);
    let mut hi = Euclid::new(upper);
    let mut quotients = Vec::new();
    let mut convergents = Vec::new();
    let (mut p1, mut p0) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q0) = (BigInt::zero(), BigInt::one());
    let stop = loop {
        if quotients.len() >= max_quotients {
            break CfStop::Limit;
        }
        let a = lo.floor();
        if a != hi.floor() {
            break CfStop::Ambiguous;
        }
        // an integer endpoint leaves the following quotient unbounded
        let lo_exact = lo.is_integer(&a);
        if !point && lo_exact {
            break CfStop::Ambiguous;
        }
        let p = &a * &p1 + &p0;
        let q = &a * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p.clone());
        q0 = std::mem::replace(&mut q1, q.clone());
        quotients.push(a.clone());
        convergents.push((p, q));
        if point && lo_exact {
            break CfStop::Terminated;
        }
        lo.step(&a);
        hi.step(&a);
        std::mem::swap(&mut lo, &mut hi);
    };
    Ok(CFExpansion {
        lower: lower.clone(),
        upper: upper.clone(),
        quotients,
        convergents,
        stop,
    })
}

/// Certified expansion of a positive enclosure.
pub fn cf_expand(x: &DyadicInterval, max_quotients: usize) -> Result<CFExpansion> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("continued fraction input {x} must be positive")));
    }
    cf_expand_bounds(&x.lo().to_rational(), &x.hi().to_rational(), max_quotients)
}

/// Expansion of an exact rational.
pub fn cf_expand_rational(r: &BigRational, max_quotients: usize) -> Result<CFExpansion> {
    cf_expand_bounds(r, r, max_quotients)
}

impl CFExpansion {
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// Index of the first convergent with `q > bound`.
    pub fn first_denominator_above(&self, bound: &BigInt) -> Option<usize> {
        self.convergents.iter().position(|(_, q)| q > bound)
    }

    /// Exact check of the recurrences, coprimality, growth of `q` and
    /// `|x - p/q| < 1/q^2` at both enclosure endpoints.
    pub fn verify(&self) -> Result<()> {
        let (mut p1, mut p0) = (BigInt::one(), BigInt::zero());
        let (mut q1, mut q0) = (BigInt::zero(), BigInt::one());
        for (i, (a, (p, q))) in self.quotients.iter().zip(&self.convergents).enumerate() {
            let ep = a * &p1 + &p0;
            let eq = a * &q1 + &q0;
            if &ep != p || &eq != q {
                return Err(Error::Mismatch {
                    lhs: format!("convergent {i} = {p}/{q}"),
                    rhs: format!("recurrence {ep}/{eq}"),
                });
            }
            if !p.gcd(q).is_one() {
                return Err(Error::Domain(format!("convergent {i} = {p}/{q} is not reduced")));
            }
            if i >= 2 && q <= &q1 {
                return Err(Error::Domain(format!("denominators stop increasing at {i}")));
            }
            let is_last_of_point = self.stop == CfStop::Terminated && i + 1 == self.quotients.len();
            if i >= 1 && !is_last_of_point {
                let c = BigRational::new(p.clone(), q.clone());
                let tol = BigRational::new(BigInt::one(), q * q);
                for x in [&self.lower, &self.upper] {
                    if (x - &c).abs() >= tol {
                        return Err(Error::Domain(format!("convergent {i} too far from {x}")));
                    }
                }
            }
            p0 = std::mem::replace(&mut p1, p.clone());
            q0 = std::mem::replace(&mut q1, q.clone());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::{dominant_root, Dyadic};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rational_355_113() {
        let cf = cf_expand_rational(&BigRational::new(355.into(), 113.into()), 50).unwrap();
        assert_eq!(cf.quotients, ints(&[3, 7, 16]));
        assert_eq!(cf.stop, CfStop::Terminated);
        assert_eq!(cf.convergents.last().unwrap(), &(BigInt::from(355), BigInt::from(113)));
        cf.verify().unwrap();
    }

    #[test]
    fn golden_ratio_all_ones() {
        let r = dominant_root(2, 256).unwrap();
        let cf = cf_expand(&r.alpha, 1000).unwrap();
        assert!(cf.len() > 150);
        assert!(cf.quotients.iter().all(|a| a.is_one()));
        assert_eq!(cf.stop, CfStop::Ambiguous);
        cf.verify().unwrap();
    }

    #[test]
    fn tau_golden_ratio_prefix() {
        let tau = dominant_root(2, 256).unwrap().tau().unwrap();
        let cf = cf_expand(&tau, 5).unwrap();
        assert_eq!(cf.quotients, ints(&[0, 1, 2, 3, 1]));
        assert_eq!(cf.stop, CfStop::Limit);
    }

    #[test]
    fn wide_interval_stops_early() {
        let x = DyadicInterval::new(Dyadic::from_int(3), Dyadic::from_int(4)).unwrap();
        let cf = cf_expand(&x, 10).unwrap();
        assert!(cf.is_empty());
        assert_eq!(cf.stop, CfStop::Ambiguous);
    }

    #[test]
    fn nonpositive_rejected() {
        assert!(cf_expand(&DyadicInterval::zero(), 5).is_err());
    }

    #[test]
    fn negative_rational() {
        let cf = cf_expand_rational(&BigRational::new((-7).into(), 3.into()), 10).unwrap();
        assert_eq!(cf.quotients, ints(&[-3, 1, 2]));
    }
}
