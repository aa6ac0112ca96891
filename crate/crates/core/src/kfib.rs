//! Exact k-generalized Fibonacci numbers and their power-of-two expansions.
//!
//! `F_n^(k)` is defined for `n >= 2 - k` with `F_{2-k} = ... = F_0 = 0`,
//! `F_1 = 1` and each later term the sum of the `k` preceding ones.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Memoized prefix of the order-`k` sequence.
///
/// New terms are produced with a running window sum, one addition and one
/// subtraction per term. Once grown, a sequence can be shared read-only.
#[derive(Clone, Debug)]
pub struct KFibSequence {
    k: u32,
    terms: Vec<BigInt>,
    window: BigInt,
}

impl KFibSequence {
    pub fn new(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidOrder { k, min: 2 });
        }
        let mut terms = vec![BigInt::zero(); k as usize - 1];
        terms.push(BigInt::one());
        Ok(KFibSequence {
            k,
            terms,
            window: BigInt::one(),
        })
    }

    /// Sequence grown through index `n_max`.
    pub fn with_terms(k: u32, n_max: i64) -> Result<Self> {
        let mut s = KFibSequence::new(k)?;
        s.extend_to(n_max);
        Ok(s)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// First defined index, `2 - k`.
    pub fn first_index(&self) -> i64 {
        2 - self.k as i64
    }

    /// Largest index currently cached.
    pub fn last_index(&self) -> i64 {
        self.first_index() + self.terms.len() as i64 - 1
    }

    pub fn extend_to(&mut self, n: i64) {
        let k = self.k as usize;
        while self.last_index() < n {
            let next = self.window.clone();
            let dropped = &self.terms[self.terms.len() - k];
            self.window = &self.window * 2u32 - dropped;
            self.terms.push(next);
        }
    }

    fn check_index(&self, n: i64) -> Result<usize> {
        if n < self.first_index() {
            return Err(Error::IndexOutOfRange {
                k: self.k,
                n,
                min: self.first_index(),
            });
        }
        Ok((n - self.first_index()) as usize)
    }

    /// `F_n`, growing the cache as needed.
    pub fn term(&mut self, n: i64) -> Result<&BigInt> {
        let i = self.check_index(n)?;
        self.extend_to(n);
        Ok(&self.terms[i])
    }

    /// `F_n` from the cache only; `None` past the cached prefix.
    pub fn get(&self, n: i64) -> Option<&BigInt> {
        let i = self.check_index(n).ok()?;
        self.terms.get(i)
    }

    /// Cached `F_n`; panics when `n` is outside the cached range.
    pub fn at(&self, n: i64) -> &BigInt {
        self.get(n)
            .unwrap_or_else(|| panic!("F_{n}^({}) not cached (last index {})", self.k, self.last_index()))
    }

    /// `2^(n-2) - F_n` for a cached `n >= 2`.
    pub fn power_gap(&self, n: i64) -> BigInt {
        (BigInt::one() << (n - 2) as u64) - self.at(n)
    }
}

fn check_order(k: u32) -> Result<()> {
    if k < 2 {
        Err(Error::InvalidOrder { k, min: 2 })
    } else {
        Ok(())
    }
}

pub fn kfib_term(k: u32, n: i64) -> Result<BigInt> {
    let mut s = KFibSequence::new(k)?;
    Ok(s.term(n)?.clone())
}

/// `F_n` through `F_n = 2 F_{n-1} - F_{n-k-1}`, valid for `n >= 3`.
pub fn kfib_three_term(k: u32, n: i64) -> Result<BigInt> {
    check_order(k)?;
    let first = 2 - k as i64;
    if n < first {
        return Err(Error::IndexOutOfRange { k, n, min: first });
    }
    // base block: indices 2-k ..= 2
    let mut v: Vec<BigInt> = vec![BigInt::zero(); k as usize - 1];
    v.push(BigInt::one());
    v.push(BigInt::one());
    let idx = |m: i64| (m - first) as usize;
    if n <= 2 {
        return Ok(v[idx(n)].clone());
    }
    for m in 3..=n {
        let next = &v[idx(m - 1)] * 2u32 - &v[idx(m - k as i64 - 1)];
        v.push(next);
    }
    Ok(v[idx(n)].clone())
}

/// Binomial coefficient with `C(a, b) = 0` whenever `a < b` or either is negative.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || a < b {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    acc
}

/// Coefficient `C_{n,j} = (-1)^j [C(n - jk, j) - C(n - jk - 2, j - 2)]`.
pub fn cooper_howard_coefficient(k: u32, n: i64, j: i64) -> BigInt {
    let k = k as i64;
    let c = binomial(n - j * k, j) - binomial(n - j * k - 2, j - 2);
    if j % 2 == 0 {
        c
    } else {
        -c
    }
}

/// Full Cooper–Howard expansion, `n >= k + 2`.
pub fn cooper_howard(k: u32, n: i64) -> Result<BigInt> {
    check_order(k)?;
    let kk = k as i64;
    if n < kk + 2 {
        return Err(Error::Domain(format!(
            "Cooper-Howard expansion needs n >= k + 2 (k = {k}, n = {n})"
        )));
    }
    // everything doubled so the smallest power 2^(-1) stays integral
    let mut twice = BigInt::one() << (n - 1) as u64;
    let j_max = (n + kk) / (kk + 1) - 1;
    for j in 1..=j_max {
        let e = n - (kk + 1) * j - 1;
        debug_assert!(e >= 0);
        twice += cooper_howard_coefficient(k, n, j) << e as u64;
    }
    let (q, r) = twice.div_rem(&BigInt::from(2));
    if !r.is_zero() {
        return Err(Error::Domain(format!(
            "Cooper-Howard sum is not an integer at k = {k}, n = {n}"
        )));
    }
    Ok(q)
}

/// `2^(n-2) - (n-k) 2^(n-k-3)` for `k + 2 <= n <= 2k + 2`.
pub fn cooper_two_term(k: u32, n: i64) -> Result<BigInt> {
    check_order(k)?;
    let kk = k as i64;
    if n < kk + 2 || n > 2 * kk + 2 {
        return Err(Error::Domain(format!(
            "two-term form needs k + 2 <= n <= 2k + 2 (k = {k}, n = {n})"
        )));
    }
    let twice = (BigInt::one() << (n - 1) as u64) - (BigInt::from(n - kk) << (n - kk - 2) as u64);
    Ok(twice / 2)
}

/// Three-term power-of-two estimate of `F_n` and its exact residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GomezEstimate {
    pub k: u32,
    pub n: i64,
    /// `2^(n-2) (1 + (k-n)/2^(k+1) + f(k,n)/2^(2k+2))`
    pub main_term: BigRational,
    /// `F_n / 2^(n-2)` minus the bracket above.
    pub zeta: BigRational,
    /// `4 n^3 / 2^(3k+3)`
    pub zeta_bound: BigRational,
}

impl GomezEstimate {
    pub fn within_bound(&self) -> bool {
        self.zeta.abs() < self.zeta_bound
    }
}

fn pow2_rational(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as u64)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as u64)
    }
}

/// `f(k, n) = (z - 1)(z + 2) / 2` with `z = 2k - n`.
pub fn gomez_f(k: u32, n: i64) -> BigRational {
    let z = 2 * k as i64 - n;
    BigRational::new(BigInt::from((z - 1) * (z + 2)), BigInt::from(2))
}

pub fn gomez_estimate(k: u32, n: i64) -> Result<GomezEstimate> {
    check_order(k)?;
    let limit = BigInt::one() << k as u64;
    if BigInt::from(n) >= limit {
        return Err(Error::Domain(format!("estimate needs n < 2^k (k = {k}, n = {n})")));
    }
    let fib = kfib_term(k, n)?;
    let kk = k as i64;
    let bracket = BigRational::one()
        + BigRational::from_integer(BigInt::from(kk - n)) * pow2_rational(-(kk + 1))
        + gomez_f(k, n) * pow2_rational(-(2 * kk + 2));
    let scale = pow2_rational(n - 2);
    let main_term = &scale * &bracket;
    let zeta = BigRational::from_integer(fib) / &scale - &bracket;
    let zeta_bound = BigRational::from_integer(BigInt::from(4) * BigInt::from(n).pow(3)) * pow2_rational(-(3 * kk + 3));
    Ok(GomezEstimate {
        k,
        n,
        main_term,
        zeta,
        zeta_bound,
    })
}
