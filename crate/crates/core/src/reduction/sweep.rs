//! Reduction sweeps over the four linear forms and the per-`k` pipeline that
//! chains them into a bound on `n`.
//!
//! With `tau = log alpha / log 2` the forms are
//!
//! * `gamma`:  `mu = log f / log 2`, `(A, B) = (200, alpha)` or `(8, 2)`
//! * `gamma1`: `mu = log(f (alpha^l - 1)) / log 2`, `(8, 2)`
//! * `gamma2`: `mu = log(f (2^j - 1)) / log 2`, `(114, alpha)`
//! * `gamma3`: `mu = log(f (alpha^l - 1) / (2^j - 1)) / log 2`, `(2^6 / log 2, 2)`
//!
//! where `f = f_k(alpha)`. Each cell also carries the variants whose constants
//! follow directly from the preceding inequalities (`2 alpha^6 / log 2` for
//! `gamma2`, base `2^0.8` for `gamma3`) and `A = 114` for `gamma3`; the
//! binding value of a cell is the largest bound over its variants.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cf::{cf_expand, CFExpansion};
use super::dp::{dp_reduce_prepared, Prepared, ReductionInstance, ReductionOutcome};
use crate::algebraic::{dominant_root, ln2, log_interval, DominantRoot, DyadicInterval};
use crate::bounds::lemma_bound;
use crate::cache::RootCache;
use crate::error::{Error, Result};

pub const DEFAULT_BITS: u32 = 2200;
pub const MAX_DOUBLINGS: usize = 5;
const MAX_QUOTIENTS: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Gamma,
    Gamma1,
    Gamma2,
    Gamma3,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::Gamma => "gamma",
            Case::Gamma1 => "gamma1",
            Case::Gamma2 => "gamma2",
            Case::Gamma3 => "gamma3",
        }
    }

    pub fn uses_l(self) -> bool {
        matches!(self, Case::Gamma1 | Case::Gamma3)
    }

    pub fn uses_j(self) -> bool {
        matches!(self, Case::Gamma2 | Case::Gamma3)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(Case::Gamma),
            "gamma1" => Ok(Case::Gamma1),
            "gamma2" => Ok(Case::Gamma2),
            "gamma3" => Ok(Case::Gamma3),
            _ => Err(Error::Domain(format!("unknown case '{s}'"))),
        }
    }
}

/// One `(A, B)` choice for a case.
#[derive(Clone, Debug)]
pub struct Variant {
    pub label: &'static str,
    pub a: DyadicInterval,
    pub b: DyadicInterval,
}

/// Everything that depends only on `(k, precision)`.
pub struct ReductionContext {
    pub k: u32,
    pub bits: u32,
    pub m: BigInt,
    pub root: DominantRoot,
    pub tau: DyadicInterval,
    pub cf: CFExpansion,
    wp: u32,
    ln2: DyadicInterval,
    ln_f: DyadicInterval,
    prepared: Prepared,
    variants: BTreeMap<Case, Vec<(Variant, DyadicInterval)>>,
}

impl ReductionContext {
    pub fn new(k: u32, bits: u32, m: BigInt) -> Result<Self> {
        Self::from_root(dominant_root(k, bits)?, m)
    }

    /// Context over an already certified root, e.g. one read from a cache.
    pub fn from_root(root: DominantRoot, m: BigInt) -> Result<Self> {
        let (k, bits) = (root.k, root.precision_bits);
        let wp = bits + 64;
        let tau = root.tau()?;
        let cf = cf_expand(&tau, MAX_QUOTIENTS)?;
        let ln_f = log_interval(&root.f_k()?, wp)?;
        let prepared = Prepared::new(&tau, &cf, &m);
        let mut ctx = ReductionContext {
            k,
            bits,
            m,
            root,
            tau,
            cf,
            wp,
            ln2: ln2(wp),
            ln_f,
            prepared,
            variants: BTreeMap::new(),
        };
        for case in [Case::Gamma, Case::Gamma1, Case::Gamma2, Case::Gamma3] {
            let vs = ctx
                .variants(case)
                .into_iter()
                .map(|v| {
                    let ln_b = log_interval(&v.b, 128)?;
                    Ok((v, ln_b))
                })
                .collect::<Result<Vec<_>>>()?;
            ctx.variants.insert(case, vs);
        }
        Ok(ctx)
    }

    /// `log(alpha^l - 1)`.
    pub fn ln_alpha_term(&self, l: i64) -> Result<DyadicInterval> {
        let v = self.root.power(l).sub(&DyadicInterval::one(), self.wp);
        log_interval(&v, self.wp)
    }

    /// `log(2^j - 1)`.
    pub fn ln_two_term(&self, j: i64) -> Result<DyadicInterval> {
        if j < 1 {
            return Err(Error::Domain(format!("j = {j} must be positive")));
        }
        let v = DyadicInterval::from_int((BigInt::from(1) << j as u64) - 1);
        log_interval(&v, self.wp)
    }

    fn mu_from_logs(&self, ln_num: &DyadicInterval) -> Result<DyadicInterval> {
        ln_num.div(&self.ln2, self.wp)
    }

    /// `mu` for a cell; `l` and `j` are ignored by the cases that do not use them.
    pub fn mu(&self, case: Case, l: i64, j: i64) -> Result<DyadicInterval> {
        let wp = self.wp;
        let num = match case {
            Case::Gamma => self.ln_f.clone(),
            Case::Gamma1 => self.ln_f.add(&self.ln_alpha_term(l)?, wp),
            Case::Gamma2 => self.ln_f.add(&self.ln_two_term(j)?, wp),
            Case::Gamma3 => self
                .ln_f
                .add(&self.ln_alpha_term(l)?, wp)
                .sub(&self.ln_two_term(j)?, wp),
        };
        self.mu_from_logs(&num)
    }

    pub fn variants(&self, case: Case) -> Vec<Variant> {
        let p = 128;
        let int = |v: i64| DyadicInterval::from_int(v);
        let two = int(2);
        let alpha = self.root.alpha.clone();
        let l2 = ln2(p);
        let a64 = int(64).div(&l2, p).expect("log 2 is positive");
        match case {
            Case::Gamma => vec![
                Variant {
                    label: "n-n1",
                    a: int(200),
                    b: alpha,
                },
                Variant {
                    label: "m-m1",
                    a: int(8),
                    b: two,
                },
            ],
            Case::Gamma1 => vec![Variant {
                label: "m-m1",
                a: int(8),
                b: two,
            }],
            Case::Gamma2 => {
                let a = int(2)
                    .mul(&alpha.powi(6, p).expect("positive"), p)
                    .div(&l2, p)
                    .expect("positive");
                vec![
                    Variant {
                        label: "stated",
                        a: int(114),
                        b: alpha.clone(),
                    },
                    Variant {
                        label: "derived",
                        a,
                        b: alpha,
                    },
                ]
            }
            Case::Gamma3 => {
                let b08 = two_pow_four_fifths(p);
                vec![
                    Variant {
                        label: "stated",
                        a: a64.clone(),
                        b: two.clone(),
                    },
                    Variant {
                        label: "quoted",
                        a: int(114),
                        b: two,
                    },
                    Variant {
                        label: "derived",
                        a: a64,
                        b: b08,
                    },
                ]
            }
        }
    }

    /// All variants of one cell with a precomputed `mu`.
    fn run_variants(&self, case: Case, mu: &DyadicInterval) -> Vec<(&'static str, Result<ReductionOutcome>)> {
        self.variants[&case]
            .iter()
            .map(|(v, ln_b)| {
                let inst = ReductionInstance {
                    tau: self.tau.clone(),
                    mu: mu.clone(),
                    a: v.a.clone(),
                    b: v.b.clone(),
                    m: self.m.clone(),
                };
                (v.label, dp_reduce_prepared(&inst, &self.cf, &self.prepared, ln_b))
            })
            .collect()
    }
}

/// Enclosure of `2^(4/5)` by bisection on `x^5 = 16`.
fn two_pow_four_fifths(prec: u32) -> DyadicInterval {
    use crate::algebraic::Dyadic;
    let sixteen = Dyadic::from_int(16);
    let (mut lo, mut hi) = (Dyadic::one(), Dyadic::from_int(2));
    let target = Dyadic::pow2(-(prec as i64));
    while hi.sub_exact(&lo) >= target {
        let mid = lo.add_exact(&hi).mul_pow2(-1);
        let sq = mid.mul_exact(&mid);
        if sq.mul_exact(&sq).mul_exact(&mid) < sixteen {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    DyadicInterval::new(lo, hi).expect("ordered")
}

/// Precision ladder for one `k`, built lazily.
pub struct Ladder {
    k: u32,
    m: BigInt,
    levels: Vec<OnceLock<std::result::Result<ReductionContext, Error>>>,
    base_bits: u32,
    cache: Option<RootCache>,
}

impl Ladder {
    pub fn new(k: u32, m: BigInt, base_bits: u32) -> Self {
        Ladder {
            k,
            m,
            levels: (0..=MAX_DOUBLINGS).map(|_| OnceLock::new()).collect(),
            base_bits,
            cache: None,
        }
    }

    /// Ladder whose roots and continued fractions go through `cache`.
    pub fn with_cache(k: u32, m: BigInt, base_bits: u32, cache: RootCache) -> Self {
        Ladder {
            cache: Some(cache),
            ..Ladder::new(k, m, base_bits)
        }
    }

    /// Ladder for a sweep spec, through `cache` when given.
    pub fn for_spec(spec: &SweepSpec, cache: Option<&RootCache>) -> Result<Self> {
        let m = spec.m_value()?;
        Ok(match cache {
            Some(c) => Ladder::with_cache(spec.k, m, spec.bits, c.clone()),
            None => Ladder::new(spec.k, m, spec.bits),
        })
    }

    fn build(&self, bits: u32) -> Result<ReductionContext> {
        let Some(cache) = &self.cache else {
            return ReductionContext::new(self.k, bits, self.m.clone());
        };
        let entry = cache.root(self.k, bits)?;
        let ctx = ReductionContext::from_root(entry.root, self.m.clone())?;
        cache.record_quotients(self.k, bits, &ctx.cf.quotients)?;
        Ok(ctx)
    }

    pub fn level(&self, i: usize) -> Result<&ReductionContext> {
        let bits = self.base_bits << i;
        self.levels[i]
            .get_or_init(|| self.build(bits))
            .as_ref()
            .map_err(|e| e.clone())
    }
}

fn needs_more_precision(e: &Error) -> bool {
    matches!(
        e,
        Error::AmbiguousQuotient { .. } | Error::PrecisionExhausted(_) | Error::Precision(_)
    )
}

/// One JSON line of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellResult {
    pub cell: usize,
    pub case: Case,
    pub k: u32,
    pub l: Option<i64>,
    pub j: Option<i64>,
    pub variant: String,
    pub q: Option<String>,
    pub epsilon_lo: Option<String>,
    pub w_bound: Option<i64>,
    pub bits: u32,
    pub error: Option<String>,
}

/// Cells of a sweep in their canonical order.
pub fn sweep_cells(case: Case, l_max: i64, j_max: i64) -> Vec<(i64, i64)> {
    match case {
        Case::Gamma => vec![(0, 0)],
        Case::Gamma1 => (1..=l_max).map(|l| (l, 0)).collect(),
        Case::Gamma2 => (1..=j_max).map(|j| (0, j)).collect(),
        Case::Gamma3 => (1..=l_max).flat_map(|l| (1..=j_max).map(move |j| (l, j))).collect(),
    }
}

/// Precomputed `log(alpha^l - 1)` and `log(2^j - 1)` at the base level.
struct LogTables {
    alpha: Vec<DyadicInterval>,
    two: Vec<DyadicInterval>,
}

impl LogTables {
    fn build(ctx: &ReductionContext, case: Case, l_max: i64, j_max: i64) -> Result<Self> {
        let alpha = if case.uses_l() {
            (1..=l_max)
                .into_par_iter()
                .map(|l| ctx.ln_alpha_term(l))
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        let two = if case.uses_j() {
            (1..=j_max)
                .into_par_iter()
                .map(|j| ctx.ln_two_term(j))
                .collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        Ok(LogTables { alpha, two })
    }

    fn mu(&self, ctx: &ReductionContext, case: Case, l: i64, j: i64) -> Result<DyadicInterval> {
        let wp = ctx.wp;
        let num = match case {
            Case::Gamma => ctx.ln_f.clone(),
            Case::Gamma1 => ctx.ln_f.add(&self.alpha[l as usize - 1], wp),
            Case::Gamma2 => ctx.ln_f.add(&self.two[j as usize - 1], wp),
            Case::Gamma3 => ctx
                .ln_f
                .add(&self.alpha[l as usize - 1], wp)
                .sub(&self.two[j as usize - 1], wp),
        };
        ctx.mu_from_logs(&num)
    }
}

fn eval_cell(ladder: &Ladder, tables: &LogTables, case: Case, index: usize, l: i64, j: i64) -> Vec<CellResult> {
    let mut level = 0;
    loop {
        let attempt = ladder.level(level).and_then(|ctx| {
            let mu = if level == 0 {
                tables.mu(ctx, case, l, j)?
            } else {
                ctx.mu(case, l, j)?
            };
            Ok((ctx.bits, ctx.run_variants(case, &mu)))
        });
        let retry = match &attempt {
            Err(e) => needs_more_precision(e),
            Ok((_, rs)) => rs.iter().any(|(_, r)| matches!(r, Err(e) if needs_more_precision(e))),
        };
        if retry && level < MAX_DOUBLINGS {
            level += 1;
            continue;
        }
        let bits = ladder.base_bits << level;
        let base = |variant: &str, bits: u32| CellResult {
            cell: index,
            case,
            k: ladder.k,
            l: case.uses_l().then_some(l),
            j: case.uses_j().then_some(j),
            variant: variant.to_string(),
            q: None,
            epsilon_lo: None,
            w_bound: None,
            bits,
            error: None,
        };
        return match attempt {
            Err(e) => vec![CellResult {
                error: Some(e.to_string()),
                ..base("all", bits)
            }],
            Ok((bits, rs)) => rs
                .into_iter()
                .map(|(label, r)| match r {
                    Ok(o) => CellResult {
                        q: Some(o.q_used.to_string()),
                        epsilon_lo: Some(o.epsilon.lo().to_sci_string(12)),
                        w_bound: Some(o.w_bound),
                        ..base(label, bits)
                    },
                    Err(e) => CellResult {
                        error: Some(e.to_string()),
                        ..base(label, bits)
                    },
                })
                .collect(),
        };
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub case: Case,
    pub k: u32,
    pub l_max: i64,
    pub j_max: i64,
    /// `M`, as a decimal string.
    pub m: String,
    pub bits: u32,
}

impl SweepSpec {
    pub fn new(case: Case, k: u32, l_max: i64, j_max: i64, m: &BigInt, bits: u32) -> Self {
        SweepSpec {
            case,
            k,
            l_max,
            j_max,
            m: m.to_string(),
            bits,
        }
    }

    fn m_value(&self) -> Result<BigInt> {
        self.m.parse().map_err(|_| Error::Domain(format!("bad M '{}'", self.m)))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepResult {
    pub cells: Vec<CellResult>,
    /// Largest `w_bound` per variant label.
    pub max_by_variant: BTreeMap<String, i64>,
    /// Lines that carry an error.
    pub failed: usize,
}

impl SweepResult {
    fn push(&mut self, c: CellResult) {
        match (c.w_bound, &c.error) {
            (Some(w), None) => {
                let e = self.max_by_variant.entry(c.variant.clone()).or_insert(w);
                *e = (*e).max(w);
            }
            _ => self.failed += 1,
        }
        self.cells.push(c);
    }

    /// Largest bound over all variants, `None` when any cell failed.
    pub fn binding_max(&self) -> Option<i64> {
        if self.failed > 0 {
            return None;
        }
        self.max_by_variant.values().copied().max()
    }

    pub fn max_for(&self, label: &str) -> Option<i64> {
        self.max_by_variant.get(label).copied()
    }
}

const CHUNK: usize = 64;

fn run_sweep<F>(spec: &SweepSpec, ladder: &Ladder, skip: usize, mut sink: F) -> Result<()>
where
    F: FnMut(usize, Vec<CellResult>) -> Result<()>,
{
    let cells = sweep_cells(spec.case, spec.l_max, spec.j_max);
    let base = ladder.level(0)?;
    let tables = LogTables::build(base, spec.case, spec.l_max, spec.j_max)?;
    for (chunk_no, chunk) in cells.chunks(CHUNK).enumerate() {
        let first = chunk_no * CHUNK;
        if first + chunk.len() <= skip {
            continue;
        }
        let results: Vec<(usize, Vec<CellResult>)> = chunk
            .par_iter()
            .enumerate()
            .filter(|(i, _)| first + i >= skip)
            .map(|(i, &(l, j))| (first + i, eval_cell(ladder, &tables, spec.case, first + i, l, j)))
            .collect();
        for (idx, rs) in results {
            sink(idx, rs)?;
        }
    }
    Ok(())
}

/// Run a sweep in memory.
pub fn reduction_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let ladder = Ladder::new(spec.k, spec.m_value()?, spec.bits);
    reduction_sweep_with(spec, &ladder)
}

/// Run a sweep against an existing ladder (shares the root and CF of `tau`).
pub fn reduction_sweep_with(spec: &SweepSpec, ladder: &Ladder) -> Result<SweepResult> {
    let mut out = SweepResult::default();
    run_sweep(spec, ladder, 0, |_, rs| {
        rs.into_iter().for_each(|c| out.push(c));
        Ok(())
    })?;
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
struct Cursor {
    spec: SweepSpec,
    completed: usize,
}

/// Run a sweep streaming JSON lines to `out`. After every completed cell the
/// cursor file records how many cells are done; rerunning with the same spec
/// resumes from there.
pub fn reduction_sweep_to_file(spec: &SweepSpec, out: &Path, cursor: &Path) -> Result<SweepResult> {
    reduction_sweep_to_file_with(spec, out, cursor, None)
}

/// [`reduction_sweep_to_file`] with roots taken from `cache` when given.
pub fn reduction_sweep_to_file_with(
    spec: &SweepSpec,
    out: &Path,
    cursor: &Path,
    cache: Option<&RootCache>,
) -> Result<SweepResult> {
    let mut result = SweepResult::default();
    let mut completed = 0usize;
    if cursor.exists() {
        let c: Cursor = serde_json::from_str(&std::fs::read_to_string(cursor)?)
            .map_err(|e| Error::Cache(format!("unreadable cursor {}: {e}", cursor.display())))?;
        if &c.spec != spec {
            return Err(Error::Cache(format!(
                "cursor {} belongs to a different sweep",
                cursor.display()
            )));
        }
        completed = c.completed;
        // keep exactly the lines of completed cells; a torn final line is dropped
        let mut kept = Vec::new();
        if out.exists() {
            let lines: Vec<String> = BufReader::new(File::open(out)?)
                .lines()
                .collect::<std::io::Result<_>>()?;
            let last = lines.len().saturating_sub(1);
            for (i, line) in lines.iter().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let cell: CellResult = match serde_json::from_str(line) {
                    Ok(c) => c,
                    Err(_) if i == last => break,
                    Err(e) => return Err(e.into()),
                };
                if cell.cell < completed {
                    kept.push(cell);
                }
            }
        }
        let mut w = BufWriter::new(File::create(out)?);
        for c in kept {
            writeln!(w, "{}", serde_json::to_string(&c)?)?;
            result.push(c);
        }
        w.flush()?;
    } else {
        File::create(out)?;
    }
    let mut writer = BufWriter::new(OpenOptions::new().append(true).open(out)?);
    let ladder = Ladder::for_spec(spec, cache)?;
    run_sweep(spec, &ladder, completed, |idx, rs| {
        for c in rs {
            writeln!(writer, "{}", serde_json::to_string(&c)?)?;
            result.push(c);
        }
        writer.flush()?;
        let cur = Cursor {
            spec: spec.clone(),
            completed: idx + 1,
        };
        let tmp = cursor.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string(&cur)?)?;
        std::fs::rename(&tmp, cursor)?;
        Ok(())
    })?;
    Ok(result)
}

/// Per-`k` chain of the four sweeps.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PipelineReport {
    pub k: u32,
    pub m: String,
    pub bits: u32,
    /// Bound on `n - n1` from `gamma` with `(200, alpha)`.
    pub gamma_n_branch: Option<i64>,
    /// Bound on `m - m1` from `gamma` with `(8, 2)`.
    pub gamma_m_branch: Option<i64>,
    /// Bound on `m - m1` when `n - n1` is small.
    pub gamma1_max: Option<i64>,
    pub gamma2_max: BTreeMap<String, i64>,
    pub gamma3_max: BTreeMap<String, i64>,
    pub l_max: i64,
    pub j_max: i64,
    /// Bound on `n` from `gamma3`, the largest over its variants; `None` when
    /// any cell failed.
    pub n_bound: Option<i64>,
    pub failed_cells: usize,
}

/// Smallest range the `l` and `j` sweeps cover, matching the `< 20` split.
const SMALL_GAP: i64 = 20;

/// Run `gamma`, then `gamma1`/`gamma2` over the resulting gaps, then `gamma3`.
pub fn final_n_bound_after_reduction(k: u32, bits: u32) -> Result<PipelineReport> {
    final_n_bound_after_reduction_with(k, bits, None)
}

/// [`final_n_bound_after_reduction`] with roots taken from `cache` when given.
pub fn final_n_bound_after_reduction_with(k: u32, bits: u32, cache: Option<&RootCache>) -> Result<PipelineReport> {
    let m = lemma_bound(k)?;
    let ladder = match cache {
        Some(c) => Ladder::with_cache(k, m.clone(), bits, c.clone()),
        None => Ladder::new(k, m.clone(), bits),
    };
    let run = |case: Case, l_max: i64, j_max: i64| {
        reduction_sweep_with(&SweepSpec::new(case, k, l_max, j_max, &m, bits), &ladder)
    };
    let g = run(Case::Gamma, 0, 0)?;
    let gn = g.max_for("n-n1");
    let gm = g.max_for("m-m1");
    let mut failed = g.failed;

    let l1 = gn.unwrap_or(0).max(SMALL_GAP);
    let g1 = run(Case::Gamma1, l1, 0)?;
    failed += g1.failed;
    let j2 = gm.unwrap_or(0).max(SMALL_GAP);
    let g2 = run(Case::Gamma2, 0, j2)?;
    failed += g2.failed;

    // either n - n1 <= gn and then m - m1 <= gamma1, or m - m1 <= gm and then n - n1 <= gamma2
    let l_max = l1.max(g2.binding_max().unwrap_or(0));
    let j_max = j2.max(g1.binding_max().unwrap_or(0));
    let g3 = run(Case::Gamma3, l_max, j_max)?;
    failed += g3.failed;
    let n_bound = if failed == 0 { g3.binding_max() } else { None };
    Ok(PipelineReport {
        k,
        m: m.to_string(),
        bits,
        gamma_n_branch: gn,
        gamma_m_branch: gm,
        gamma1_max: g1.binding_max(),
        gamma2_max: g2.max_by_variant,
        gamma3_max: g3.max_by_variant,
        l_max,
        j_max,
        n_bound,
        failed_cells: failed,
    })
}
