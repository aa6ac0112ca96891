//! Solutions of `F_n - 2^m = F_{n1} - 2^{m1}`: the parametric families, their
//! classification, and exhaustive search over bounded ranges.
//!
//! Two search strategies are provided. The naive one loops over every
//! `(n, n1)` and every `(m, m1)` in the admissible window. The hash strategy
//! reduces both sides modulo a fixed modulus, intersects sorted residue
//! arrays and re-verifies each collision exactly, so the modulus only affects
//! speed.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebraic::{dominant_root, ln2};
use crate::error::{Error, Result};
use crate::kfib::KFibSequence;

/// Residue modulus used when none is given.
pub fn default_modulus() -> BigInt {
    BigInt::from(10u32).pow(20)
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(c)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii-a")]
    IIa,
    #[serde(rename = "ii-b")]
    IIb,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "sporadic")]
    Sporadic,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::I => "i",
            Family::IIa => "ii-a",
            Family::IIb => "ii-b",
            Family::III => "iii",
            Family::IV => "iv",
            Family::Sporadic => "sporadic",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A verified solution `(c, n, m, n1, m1)` for order `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub k: u32,
    #[serde(with = "decimal")]
    pub c: BigInt,
    pub n: i64,
    pub m: i64,
    pub n1: i64,
    pub m1: i64,
    pub family: Family,
}

impl SolutionRecord {
    pub fn tuple(&self) -> (i64, i64, i64, i64) {
        (self.n, self.m, self.n1, self.m1)
    }
}

fn pow2(e: i64) -> BigInt {
    BigInt::one() << e as u64
}

fn check_ordering(n: i64, m: i64, n1: i64, m1: i64) -> Result<()> {
    if !(n > n1 && n1 >= 2) {
        return Err(Error::Range(format!("need n > n1 >= 2, got n = {n}, n1 = {n1}")));
    }
    if !(m > m1 && m1 >= 0) {
        return Err(Error::Range(format!("need m > m1 >= 0, got m = {m}, m1 = {m1}")));
    }
    Ok(())
}

fn verify_with(seq: &mut KFibSequence, n: i64, m: i64, n1: i64, m1: i64) -> Result<SolutionRecord> {
    check_ordering(n, m, n1, m1)?;
    let lhs = seq.term(n)? - pow2(m);
    let rhs = seq.term(n1)? - pow2(m1);
    if lhs != rhs {
        return Err(Error::Mismatch {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    let mut rec = SolutionRecord {
        k: seq.k(),
        c: lhs,
        n,
        m,
        n1,
        m1,
        family: Family::Sporadic,
    };
    rec.family = classify(&rec);
    Ok(rec)
}

/// Exact check of `F_n - 2^m = F_{n1} - 2^{m1}`; the record carries its family.
pub fn verify_solution(k: u32, n: i64, m: i64, n1: i64, m1: i64) -> Result<SolutionRecord> {
    check_ordering(n, m, n1, m1)?;
    let mut seq = KFibSequence::new(k)?;
    verify_with(&mut seq, n, m, n1, m1)
}

/// Which parametrization produced a family instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyForm {
    /// The tuple listed in the theorem.
    Theorem,
    /// Family (iii) as listed in the theorem.
    Statement,
    /// Family (iii) as obtained from the case analysis.
    Derived,
}

/// A parametric instance and the outcome of verifying it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInstance {
    pub family: Family,
    pub form: FamilyForm,
    pub k: u32,
    /// The value of `c` given by the parametrization.
    #[serde(with = "decimal")]
    pub c: BigInt,
    pub n: i64,
    pub m: i64,
    pub n1: i64,
    pub m1: i64,
    /// Parameters as `name=value` pairs, e.g. `a=2 b=0`.
    pub params: String,
    pub verified: bool,
    pub discrepancy: Option<String>,
}

struct Candidate {
    family: Family,
    form: FamilyForm,
    c: BigInt,
    tuple: (i64, i64, i64, i64),
    params: String,
    /// Parameter side conditions that fail.
    violated: Option<String>,
}

fn is_pow2(x: i64) -> Option<u32> {
    (x > 0 && x & (x - 1) == 0).then(|| x.trailing_zeros())
}

/// Every instance of families (ii)-(iv) for order `k`, with side conditions
/// recorded rather than enforced for (iii) as stated.
fn candidates(k: u32) -> Vec<Candidate> {
    let k = k as i64;
    let mut out = Vec::new();
    out.push(Candidate {
        family: Family::IIa,
        form: FamilyForm::Theorem,
        c: pow2(k - 1) - 1,
        tuple: (k + 2, k - 1, k + 1, 0),
        params: String::new(),
        violated: None,
    });
    for a in 1..40i64 {
        if (1i64 << (a - 1)) > k + 2 {
            break;
        }
        for b in 0..a {
            let d = (1i64 << a) - (1i64 << b);
            if (a, b) == (1, 0) || d < 2 || d > k + 2 || b + d > k + 2 {
                continue;
            }
            let gamma = b - 3 + d;
            let rho = a - 3 + d;
            out.push(Candidate {
                family: Family::IIb,
                form: FamilyForm::Theorem,
                c: pow2(gamma) - pow2(rho),
                tuple: (k + d, k + d - 2, gamma + 2, rho),
                params: format!("a={a} b={b}"),
                violated: None,
            });
        }
    }
    // (iii) as stated: a maximal with 2^a <= k + 2 and a + 2^a = k + 1 + 2^b
    let a = 63 - ((k + 2) as u64).leading_zeros() as i64;
    if let Some(b) = is_pow2(a + (1i64 << a) - k - 1) {
        let b = b as i64;
        out.push(Candidate {
            family: Family::III,
            form: FamilyForm::Statement,
            c: -pow2(a + (1i64 << a) - 3),
            tuple: (
                k + (1i64 << a),
                k + (1i64 << a) - 2,
                k + (1i64 << b),
                b + (1i64 << b) - 3,
            ),
            params: format!("a={a} b={b}"),
            violated: (b == 0).then(|| "b = 0 is not a positive integer".to_string()),
        });
    }
    // (iii) as derived: n - k + 1 = 2^t in [3, k + 3]
    for t in 2..40i64 {
        let p = 1i64 << t;
        if p > k + 3 {
            break;
        }
        out.push(Candidate {
            family: Family::III,
            form: FamilyForm::Derived,
            c: pow2(k + p - 4) + pow2(p - 4) - pow2(t + p - 4),
            tuple: (k + p - 1, k + p - 4, k + p - 2, t + p - 5),
            params: format!("t={t}"),
            violated: None,
        });
    }
    if let Some(t) = is_pow2(k + 3).filter(|&t| t >= 3) {
        let t = t as i64;
        let p = 1i64 << t;
        out.push(Candidate {
            family: Family::IV,
            form: FamilyForm::Theorem,
            c: 1 - pow2(t + p - 3),
            tuple: (2 * p - 3, 2 * p - 5, 2, t + p - 3),
            params: format!("t={t}"),
            violated: None,
        });
    }
    out
}

fn is_family_i(k: u32, n: i64, m: i64, n1: i64, m1: i64) -> bool {
    2 <= n1 && n1 < n && n <= k as i64 + 1 && m == n - 2 && m1 == n1 - 2
}

/// Family tag of a verified record; `Sporadic` when no parametrization matches.
pub fn classify(rec: &SolutionRecord) -> Family {
    let (n, m, n1, m1) = rec.tuple();
    if rec.c.is_zero() && is_family_i(rec.k, n, m, n1, m1) {
        return Family::I;
    }
    candidates(rec.k)
        .into_iter()
        .find(|cand| cand.tuple == rec.tuple() && cand.c == rec.c)
        .map_or(Family::Sporadic, |cand| cand.family)
}

/// All family instances with `n <= n_max`, each checked exactly. Instances
/// that fail are kept with `verified = false` and a discrepancy note.
pub fn family_enumerate(k: u32, n_max: i64) -> Result<Vec<FamilyInstance>> {
    if k < 4 {
        return Err(Error::InvalidOrder { k, min: 4 });
    }
    let mut seq = KFibSequence::with_terms(k, n_max.max(2))?;
    let mut out = Vec::new();
    for s in 3..=(k as i64 + 1).min(n_max) {
        for t in 2..s {
            let inst = instance(
                &mut seq,
                Family::I,
                FamilyForm::Theorem,
                BigInt::zero(),
                (s, s - 2, t, t - 2),
            );
            out.push(FamilyInstance {
                params: format!("s={s} t={t}"),
                ..inst
            });
        }
    }
    for cand in candidates(k) {
        if cand.tuple.0 > n_max {
            continue;
        }
        let mut inst = instance(&mut seq, cand.family, cand.form, cand.c, cand.tuple);
        inst.params = cand.params;
        if let Some(v) = cand.violated {
            inst.discrepancy = Some(match inst.discrepancy {
                Some(d) => format!("{v}; {d}"),
                None => v,
            });
            inst.verified = false;
        }
        out.push(inst);
    }
    Ok(out)
}

fn instance(
    seq: &mut KFibSequence,
    family: Family,
    form: FamilyForm,
    c: BigInt,
    (n, m, n1, m1): (i64, i64, i64, i64),
) -> FamilyInstance {
    let discrepancy = match verify_with(seq, n, m, n1, m1) {
        Ok(rec) if rec.c == c => None,
        Ok(rec) => Some(format!("equation holds with c = {} but the family gives {c}", rec.c)),
        Err(e) => Some(e.to_string()),
    };
    FamilyInstance {
        family,
        form,
        k: seq.k(),
        c,
        n,
        m,
        n1,
        m1,
        params: String::new(),
        verified: discrepancy.is_none(),
        discrepancy,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Naive,
    Hash,
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(SearchMode::Naive),
            "hash" => Ok(SearchMode::Hash),
            _ => Err(Error::Domain(format!(
                "unknown search mode '{s}' (expected naive or hash)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub k_min: u32,
    pub k_max: u32,
    pub n_max: i64,
    pub modulus: BigInt,
    pub mode: SearchMode,
}

impl SearchConfig {
    pub fn new(k_min: u32, k_max: u32, n_max: i64, mode: SearchMode) -> Self {
        SearchConfig {
            k_min,
            k_max,
            n_max,
            modulus: default_modulus(),
            mode,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_min < 4 {
            return Err(Error::InvalidOrder { k: self.k_min, min: 4 });
        }
        if self.k_min > self.k_max {
            return Err(Error::Range(format!(
                "empty order range [{}, {}]",
                self.k_min, self.k_max
            )));
        }
        if self.n_max < self.k_max as i64 + 2 {
            return Err(Error::Range(format!(
                "n_max = {} must be at least k_max + 2 = {}",
                self.n_max,
                self.k_max + 2
            )));
        }
        if self.modulus < BigInt::from(2) || self.modulus.bits() > 126 {
            return Err(Error::Range(format!("modulus {} must lie in [2, 2^126)", self.modulus)));
        }
        Ok(())
    }
}

/// The range of `m` to examine for a given `n`: the rounded window
/// `[c (n - 4), c (n - 1) + 1]` with `c = log(alpha) / log 2`, widened by one
/// on each side and clipped to `m >= 1`.
pub fn m_window(slope: f64, n: i64) -> (i64, i64) {
    let lo = (slope * (n - 4) as f64).round() as i64 - 1;
    let hi = (slope * (n - 1) as f64 + 1.0).round() as i64 + 1;
    (lo.max(1), hi)
}

/// `log(alpha) / log 2` for order `k`.
pub fn window_slope(k: u32) -> Result<f64> {
    let root = dominant_root(k, 96)?;
    Ok(root.ln_alpha()?.div(&ln2(96), 96)?.to_f64())
}

struct OrderData {
    k: u32,
    seq: KFibSequence,
    pow2: Vec<BigInt>,
    slope: f64,
}

impl OrderData {
    fn new(k: u32, n_max: i64) -> Result<Self> {
        let slope = window_slope(k)?;
        let m_top = m_window(slope, n_max).1;
        let pow2 = (0..=m_top).map(pow2).collect();
        Ok(OrderData {
            k,
            seq: KFibSequence::with_terms(k, n_max)?,
            pow2,
            slope,
        })
    }

    fn record(&self, n: i64, m: i64, n1: i64, m1: i64) -> SolutionRecord {
        let mut rec = SolutionRecord {
            k: self.k,
            c: self.seq.at(n) - &self.pow2[m as usize],
            n,
            m,
            n1,
            m1,
            family: Family::Sporadic,
        };
        rec.family = classify(&rec);
        rec
    }

    fn naive_for_n(&self, n: i64) -> Vec<SolutionRecord> {
        let (m_lo, m_hi) = m_window(self.slope, n);
        let mut out = Vec::new();
        for n1 in 2..n {
            let d = self.seq.at(n) - self.seq.at(n1);
            for m in m_lo..=m_hi {
                let r = &self.pow2[m as usize] - &d;
                for m1 in 0..m {
                    if r == self.pow2[m1 as usize] {
                        out.push(self.record(n, m, n1, m1));
                    }
                }
            }
        }
        out
    }

    fn hash_for_n(&self, n: i64, modulus: u128, pow2_res: &[u128], fib_res: &[u128]) -> Vec<SolutionRecord> {
        let (m_lo, m_hi) = m_window(self.slope, n);
        let sub = |x: u128, y: u128| (x + modulus - y) % modulus;
        let mut diffs: Vec<(u128, i64, i64)> = (m_lo..=m_hi)
            .flat_map(|m| (0..m).map(move |m1| (m, m1)))
            .map(|(m, m1)| (sub(pow2_res[m as usize], pow2_res[m1 as usize]), m, m1))
            .collect();
        diffs.sort_unstable();
        let f_n = fib_res[n as usize];
        let mut out = Vec::new();
        for n1 in 2..n {
            let key = sub(f_n, fib_res[n1 as usize]);
            let start = diffs.partition_point(|e| e.0 < key);
            for &(_, m, m1) in diffs[start..].iter().take_while(|e| e.0 == key) {
                let lhs = self.seq.at(n) - self.seq.at(n1);
                if lhs == &self.pow2[m as usize] - &self.pow2[m1 as usize] {
                    out.push(self.record(n, m, n1, m1));
                }
            }
        }
        out
    }
}

fn to_residue(x: &BigInt, modulus: &BigInt) -> u128 {
    let r = ((x % modulus) + modulus) % modulus;
    r.to_u128().expect("residue below a 126-bit modulus")
}

fn search_order(cfg: &SearchConfig, k: u32) -> Result<Vec<SolutionRecord>> {
    let data = OrderData::new(k, cfg.n_max)?;
    let ns: Vec<i64> = (3..=cfg.n_max).collect();
    let per_n: Vec<Vec<SolutionRecord>> = match cfg.mode {
        SearchMode::Naive => ns.par_iter().map(|&n| data.naive_for_n(n)).collect(),
        SearchMode::Hash => {
            let modulus = cfg.modulus.to_u128().expect("validated modulus");
            let pow2_res: Vec<u128> = data.pow2.iter().map(|p| to_residue(p, &cfg.modulus)).collect();
            let fib_res: Vec<u128> = (0..=cfg.n_max)
                .map(|n| to_residue(data.seq.at(n), &cfg.modulus))
                .collect();
            ns.par_iter()
                .map(|&n| data.hash_for_n(n, modulus, &pow2_res, &fib_res))
                .collect()
        }
    };
    Ok(per_n.into_iter().flatten().collect())
}

/// Exact search over `(n, n1)` and `(m, m1)` in the window for every order in range.
pub fn brute_force_search(cfg: &SearchConfig) -> Result<Vec<SolutionRecord>> {
    search(&SearchConfig {
        mode: SearchMode::Naive,
        ..cfg.clone()
    })
}

/// Residue-intersection search with exact re-verification of every collision.
pub fn hash_search(cfg: &SearchConfig) -> Result<Vec<SolutionRecord>> {
    search(&SearchConfig {
        mode: SearchMode::Hash,
        ..cfg.clone()
    })
}

/// Search with the strategy named in `cfg`. Results are sorted and audited;
/// an audit failure is reported as an error.
pub fn search(cfg: &SearchConfig) -> Result<Vec<SolutionRecord>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for k in cfg.k_min..=cfg.k_max {
        out.extend(search_order(cfg, k)?);
    }
    out.sort();
    if let Some(e) = audit(&out).into_iter().next() {
        return Err(e);
    }
    Ok(out)
}

/// Structural checks every solution must pass: `c = 0` only for `n <= k + 1`,
/// and when `2 <= n1 <= k + 1 < n <= 2k + 2`, `m = n - 3` if `n1 = n - 1` and
/// `m = n - 2` otherwise.
pub fn audit(records: &[SolutionRecord]) -> Vec<Error> {
    let mut errs = Vec::new();
    for r in records {
        let k = r.k as i64;
        if r.c.is_zero() && r.n > k + 1 {
            errs.push(Error::Mismatch {
                lhs: format!("c = 0 at k = {}, n = {}", r.k, r.n),
                rhs: format!("zero c requires n <= {}", k + 1),
            });
        }
        if (2..=k + 1).contains(&r.n1) && (k + 2..=2 * k + 2).contains(&r.n) {
            let expected = if r.n1 == r.n - 1 { r.n - 3 } else { r.n - 2 };
            if r.m != expected {
                errs.push(Error::Mismatch {
                    lhs: format!("m = {} for k = {}, (n, n1) = ({}, {})", r.m, r.k, r.n, r.n1),
                    rhs: format!("m = {expected}"),
                });
            }
        }
    }
    errs
}

pub fn write_jsonl<W: Write>(records: &[SolutionRecord], mut w: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv<W: Write>(records: &[SolutionRecord], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in records {
        wtr.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn nonzero_cs(recs: &[SolutionRecord]) -> BTreeSet<BigInt> {
        recs.iter().filter(|r| !r.c.is_zero()).map(|r| r.c.clone()).collect()
    }

    #[test]
    fn verify_examples() {
        let r = verify_solution(4, 6, 3, 5, 0).unwrap();
        assert_eq!((r.c.clone(), r.family), (BigInt::from(7), Family::IIa));
        let r = verify_solution(4, 5, 3, 3, 1).unwrap();
        assert_eq!((r.c.clone(), r.family), (BigInt::zero(), Family::I));
        let r = verify_solution(5, 13, 11, 2, 8).unwrap();
        assert_eq!((r.c.clone(), r.family), (BigInt::from(-255), Family::IV));
        assert_eq!(
            verify_solution(4, 6, 3, 5, 1),
            Err(Error::Mismatch {
                lhs: "7".into(),
                rhs: "6".into()
            })
        );
        assert!(matches!(verify_solution(4, 5, 3, 5, 1), Err(Error::Range(_))));
        assert!(matches!(verify_solution(4, 6, 1, 5, 1), Err(Error::Range(_))));
    }

    #[test]
    fn families_k4() {
        let fam = family_enumerate(4, 10).unwrap();
        let has = |f: Family, t: (i64, i64, i64, i64), c: i64| {
            fam.iter()
                .any(|x| x.family == f && (x.n, x.m, x.n1, x.m1) == t && x.c == BigInt::from(c) && x.verified)
        };
        assert!(has(Family::IIb, (7, 5, 2, 2), -3));
        assert!(has(Family::IIb, (6, 4, 2, 1), -1));
        assert!(has(Family::IIb, (8, 6, 5, 4), -8));
        assert!(has(Family::III, (7, 4, 6, 1), 13));
        assert!(has(Family::IIa, (6, 3, 5, 0), 7));
        // the stated (iii) form at k = 4 needs b = 0 and gives m1 = -2
        let stated: Vec<_> = fam.iter().filter(|x| x.form == FamilyForm::Statement).collect();
        assert_eq!(stated.len(), 1);
        assert_eq!(stated[0].m1, -2);
        assert!(!stated[0].verified);
    }

    #[test]
    fn family_iv_orders() {
        let with_iv: Vec<u32> = (4..=30)
            .filter(|&k| {
                family_enumerate(k, 2 * k as i64 + 3)
                    .unwrap()
                    .iter()
                    .any(|x| x.family == Family::IV)
            })
            .collect();
        assert_eq!(with_iv, vec![5, 13, 29]);
        let fam = family_enumerate(5, 13).unwrap();
        assert!(fam
            .iter()
            .any(|x| x.family == Family::IV && x.c == BigInt::from(-255) && x.verified));
    }

    #[test]
    fn theorem_and_derived_families_verify() {
        for k in 4..=30 {
            for x in family_enumerate(k, 2 * k as i64 + 3).unwrap() {
                if x.form != FamilyForm::Statement {
                    assert!(x.verified, "{x:?}");
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let rec = |k, c: i64, n, m, n1, m1| SolutionRecord {
            k,
            c: BigInt::from(c),
            n,
            m,
            n1,
            m1,
            family: Family::Sporadic,
        };
        assert_eq!(classify(&rec(4, 0, 5, 3, 3, 1)), Family::I);
        assert_eq!(classify(&rec(4, 7, 6, 3, 5, 0)), Family::IIa);
        assert_eq!(classify(&rec(4, 13, 7, 4, 6, 1)), Family::III);
        assert_eq!(classify(&rec(4, 1, 9, 9, 9, 9)), Family::Sporadic);
    }

    #[test]
    fn k4_search_nonzero_set() {
        let cfg = SearchConfig::new(4, 4, 10, SearchMode::Naive);
        let naive = brute_force_search(&cfg).unwrap();
        let want: BTreeSet<BigInt> = [7, -3, -1, -8, 13].into_iter().map(BigInt::from).collect();
        assert_eq!(nonzero_cs(&naive), want);
        assert_eq!(naive.iter().filter(|r| r.c.is_zero()).count(), 6);
        assert_eq!(hash_search(&cfg).unwrap(), naive);
    }

    #[test]
    fn small_modulus_same_records() {
        let mut cfg = SearchConfig::new(4, 5, 16, SearchMode::Hash);
        let base = search(&cfg).unwrap();
        cfg.modulus = BigInt::from(97);
        assert_eq!(search(&cfg).unwrap(), base);
        cfg.modulus = BigInt::from(2);
        assert_eq!(search(&cfg).unwrap(), base);
        assert!(base.iter().any(|r| r.k == 5 && r.c == BigInt::from(-255)));
    }

    #[test]
    fn no_solution_at_2k_plus_3_for_k4() {
        let recs = brute_force_search(&SearchConfig::new(4, 4, 11, SearchMode::Naive)).unwrap();
        assert!(recs.iter().all(|r| r.n < 11));
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(3, 4, 10, SearchMode::Naive).validate().is_err());
        assert!(SearchConfig::new(4, 10, 11, SearchMode::Naive).validate().is_err());
        let mut c = SearchConfig::new(4, 4, 10, SearchMode::Hash);
        c.modulus = BigInt::one();
        assert!(c.validate().is_err());
        assert_eq!("hash".parse::<SearchMode>().unwrap(), SearchMode::Hash);
        assert!("fast".parse::<SearchMode>().is_err());
    }

    #[test]
    fn audit_flags_violations() {
        let bad = SolutionRecord {
            k: 4,
            c: BigInt::zero(),
            n: 7,
            m: 4,
            n1: 2,
            m1: 0,
            family: Family::Sporadic,
        };
        assert_eq!(audit(&[bad]).len(), 2);
    }

    #[test]
    fn window_contains_family_m() {
        for k in 4..=12 {
            let slope = window_slope(k).unwrap();
            for x in family_enumerate(k, 2 * k as i64 + 3).unwrap() {
                if x.verified {
                    let (lo, hi) = m_window(slope, x.n);
                    assert!(lo <= x.m && x.m <= hi, "{x:?}");
                }
            }
        }
    }

    #[test]
    fn writers() {
        let recs = brute_force_search(&SearchConfig::new(4, 4, 8, SearchMode::Naive)).unwrap();
        let mut j = Vec::new();
        write_jsonl(&recs, &mut j).unwrap();
        let text = String::from_utf8(j).unwrap();
        assert!(text.contains(r#"{"k":4,"c":"7","n":6,"m":3,"n1":5,"m1":0,"family":"ii-a"}"#));
        let back: Vec<SolutionRecord> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(back, recs);
        let mut c = Vec::new();
        write_csv(&recs, &mut c).unwrap();
        let csv = String::from_utf8(c).unwrap();
        assert!(csv.starts_with("k,c,n,m,n1,m1,family\n"));
        assert!(csv.contains("4,7,6,3,5,0,ii-a"));
    }
}
