//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification discrepancy or sporadic solution
//! was found, 2 usage error, 3 computation failure.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use kfib_pillai::algebraic::{dominant_root, DominantRoot, Dyadic};
use kfib_pillai::bounds::{baker_chain, hyp_holds, lemma_bound, BoundReport, N_FLOOR};
use kfib_pillai::cache::RootCache;
use kfib_pillai::kfib::kfib_term;
use kfib_pillai::reduction::{
    final_n_bound_after_reduction_with, reduction_sweep_to_file_with, reduction_sweep_with, Case, Ladder, SweepSpec,
    DEFAULT_BITS,
};
use kfib_pillai::search::{
    family_enumerate, search, write_csv, write_jsonl, Family, FamilyInstance, SearchConfig, SearchMode, SolutionRecord,
};
use kfib_pillai::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISCREPANCY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

/// Largest bound on `n` the reduction is expected to give.
const EXPECTED_N_BOUND: i64 = 1574;

#[derive(Parser, Debug)]
#[command(
    name = "kfib-pillai",
    version,
    about = "Differences of k-generalized Fibonacci numbers and powers of two"
)]
struct Cli {
    /// Directory of cached roots [default: $KFIB_CACHE_DIR, unset means no cache]
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Do not read or write the root cache
    #[arg(long, global = true)]
    no_cache: bool,
    /// Write the main output to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Naive,
    Hash,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Jsonl,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print F_n of order k
    Fib {
        #[arg(long)]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Certified enclosure of the dominant root
    Root {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: u32,
    },
    /// Enumerate and verify the parametric families
    Families {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n_max: i64,
    },
    /// Exhaustive search for solutions
    Search {
        #[arg(long)]
        k_min: u32,
        #[arg(long)]
        k_max: u32,
        #[arg(long)]
        n_max: i64,
        #[arg(long, value_enum, default_value = "hash")]
        mode: ModeArg,
        #[arg(long, default_value = "100000000000000000000")]
        modulus: String,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: FormatArg,
    },
    /// Linear-forms bound chain for one k
    Bounds {
        #[arg(long)]
        k: u32,
        /// Value of n the first stages are evaluated at
        #[arg(long, default_value_t = N_FLOOR)]
        n_hyp: i64,
    },
    /// Continued-fraction reduction sweep for one case
    Reduce {
        #[arg(long, value_parser = parse_case)]
        case: Case,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 20)]
        l_max: i64,
        #[arg(long, default_value_t = 20)]
        j_max: i64,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: u32,
        /// Bound M on the coefficient [default: the absolute bound for k]
        #[arg(long)]
        m: Option<String>,
        /// Stream cells to FILE, resuming from FILE.cursor if present
        #[arg(long, value_name = "FILE")]
        cells: Option<PathBuf>,
    },
    /// All four reduction sweeps chained for one k
    Pipeline {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: u32,
    },
    /// Families, search and classification over a range of k
    Report {
        #[arg(long)]
        k_min: u32,
        #[arg(long)]
        k_max: u32,
        #[arg(long, default_value_t = 200)]
        n_max: i64,
        #[arg(long, value_enum, default_value = "hash")]
        mode: ModeArg,
        #[arg(long, default_value = "100000000000000000000")]
        modulus: String,
    },
}

fn parse_case(s: &str) -> Result<Case, String> {
    s.parse::<Case>().map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Compute(e.into())
    }
}

type Outcome = Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(usage(msg()))
    }
}

struct Ctx {
    cache: Option<RootCache>,
    out: Option<PathBuf>,
}

impl Ctx {
    /// The single writer for the command's main output.
    fn writer(&self) -> Result<Box<dyn Write>, Failure> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        })
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> Result<(), Failure> {
        let mut w = self.writer()?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }
}

fn status(discrepancy: bool) -> i32 {
    if discrepancy {
        EXIT_DISCREPANCY
    } else {
        EXIT_OK
    }
}

/// Run the command line `args` (program name first) and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cache = if cli.no_cache {
        None
    } else {
        cli.cache.clone().map(RootCache::new).or_else(RootCache::from_env)
    };
    let ctx = Ctx {
        cache,
        out: cli.out.clone(),
    };
    match dispatch(&ctx, cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            EXIT_USAGE
        }
        Err(Failure::Compute(e)) => {
            eprintln!("computation failed: {e}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(ctx: &Ctx, cmd: Command) -> Outcome {
    match cmd {
        Command::Fib { k, n } => cmd_fib(ctx, k, n),
        Command::Root { k, bits } => cmd_root(ctx, k, bits),
        Command::Families { k, n_max } => cmd_families(ctx, k, n_max),
        Command::Search {
            k_min,
            k_max,
            n_max,
            mode,
            modulus,
            format,
        } => {
            let cfg = search_config(k_min, k_max, n_max, mode, &modulus)?;
            cmd_search(ctx, &cfg, format)
        }
        Command::Bounds { k, n_hyp } => cmd_bounds(ctx, k, n_hyp),
        Command::Reduce {
            case,
            k,
            l_max,
            j_max,
            bits,
            m,
            cells,
        } => cmd_reduce(ctx, case, k, l_max, j_max, bits, m, cells),
        Command::Pipeline { k, bits } => cmd_pipeline(ctx, k, bits),
        Command::Report {
            k_min,
            k_max,
            n_max,
            mode,
            modulus,
        } => {
            let cfg = search_config(k_min, k_max, n_max, mode, &modulus)?;
            cmd_report(ctx, &cfg)
        }
    }
}

fn cmd_fib(ctx: &Ctx, k: u32, n: i64) -> Outcome {
    ensure(k >= 2, || format!("--k must be at least 2, got {k}"))?;
    ensure(n >= 2 - k as i64, || {
        format!("--n must be at least {} for k = {k}", 2 - k as i64)
    })?;
    let f = kfib_term(k, n)?;
    let mut w = ctx.writer()?;
    writeln!(w, "{f}")?;
    w.flush()?;
    Ok(EXIT_OK)
}

fn check_root_args(k: u32, bits: u32) -> Result<(), Failure> {
    ensure(k >= 2, || format!("--k must be at least 2, got {k}"))?;
    ensure(bits >= 16, || format!("--bits must be at least 16, got {bits}"))
}

fn obtain_root(ctx: &Ctx, k: u32, bits: u32) -> Result<(DominantRoot, Option<bool>), Failure> {
    match &ctx.cache {
        Some(cache) => {
            let r = cache.root(k, bits)?;
            eprintln!(
                "cache {}: {}",
                if r.hit { "hit" } else { "miss" },
                cache.path(k, bits).display()
            );
            Ok((r.root, Some(r.hit)))
        }
        None => Ok((dominant_root(k, bits)?, None)),
    }
}

#[derive(Serialize)]
struct RootOutput {
    k: u32,
    bits: u32,
    lo: String,
    hi: String,
    lo_exact: String,
    hi_exact: String,
    f_k: String,
    cache_hit: Option<bool>,
}

fn exact(d: &Dyadic) -> String {
    format!("{} p {}", d.mantissa().to_str_radix(16), d.exponent())
}

fn cmd_root(ctx: &Ctx, k: u32, bits: u32) -> Outcome {
    check_root_args(k, bits)?;
    let (root, cache_hit) = obtain_root(ctx, k, bits)?;
    let digits = ((bits as f64) * std::f64::consts::LOG10_2) as usize + 2;
    let out = RootOutput {
        k,
        bits,
        lo: root.alpha.lo().to_sci_string(digits),
        hi: root.alpha.hi().to_sci_string(digits),
        lo_exact: exact(root.alpha.lo()),
        hi_exact: exact(root.alpha.hi()),
        f_k: root.f_k()?.midpoint().to_sci_string(20),
        cache_hit,
    };
    ctx.emit_json(&out)?;
    Ok(EXIT_OK)
}

fn cmd_families(ctx: &Ctx, k: u32, n_max: i64) -> Outcome {
    ensure(k >= 4, || format!("--k must be at least 4, got {k}"))?;
    ensure(n_max >= 2, || format!("--n-max must be at least 2, got {n_max}"))?;
    let fam = family_enumerate(k, n_max)?;
    ctx.emit_json(&fam)?;
    let bad = fam.iter().filter(|f| !f.verified).count();
    if bad > 0 {
        eprintln!("{bad} family instance(s) failed verification");
    }
    Ok(status(bad > 0))
}

fn search_config(k_min: u32, k_max: u32, n_max: i64, mode: ModeArg, modulus: &str) -> Result<SearchConfig, Failure> {
    let modulus: BigInt = modulus
        .parse()
        .map_err(|_| usage(format!("--modulus '{modulus}' is not an integer")))?;
    let mode = match mode {
        ModeArg::Naive => SearchMode::Naive,
        ModeArg::Hash => SearchMode::Hash,
    };
    let cfg = SearchConfig {
        k_min,
        k_max,
        n_max,
        modulus,
        mode,
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    Ok(cfg)
}

fn cmd_search(ctx: &Ctx, cfg: &SearchConfig, format: FormatArg) -> Outcome {
    let recs = search(cfg)?;
    let w = ctx.writer()?;
    match format {
        FormatArg::Jsonl => write_jsonl(&recs, w)?,
        FormatArg::Csv => write_csv(&recs, w)?,
    }
    let nonzero = recs.iter().filter(|r| r.c != BigInt::from(0)).count();
    let sporadic = recs.iter().filter(|r| r.family == Family::Sporadic).count();
    eprintln!(
        "{} solutions, {nonzero} with nonzero c, {sporadic} sporadic",
        recs.len()
    );
    Ok(status(sporadic > 0))
}

#[derive(Serialize)]
struct BoundsOutput {
    chain: BoundReport,
    lemma_bound: String,
    lemma_bound_satisfies_hypothesis: bool,
    consistent: bool,
}

fn cmd_bounds(ctx: &Ctx, k: u32, n_hyp: i64) -> Outcome {
    ensure(k >= 4, || format!("--k must be at least 4, got {k}"))?;
    ensure(n_hyp >= N_FLOOR, || format!("--n-hyp must be at least {N_FLOOR}"))?;
    let chain = baker_chain(k, &BigInt::from(n_hyp))?;
    let mk = lemma_bound(k)?;
    let out = BoundsOutput {
        chain: chain.report(),
        lemma_bound_satisfies_hypothesis: hyp_holds(k, &mk),
        lemma_bound: mk.to_string(),
        consistent: chain.consistent(),
    };
    ctx.emit_json(&out)?;
    Ok(status(!out.consistent))
}

#[derive(Serialize)]
struct ReduceOutput {
    spec: SweepSpec,
    cells: usize,
    failed: usize,
    max_by_variant: std::collections::BTreeMap<String, i64>,
    binding_max: Option<i64>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_reduce(
    ctx: &Ctx,
    case: Case,
    k: u32,
    l_max: i64,
    j_max: i64,
    bits: u32,
    m: Option<String>,
    cells: Option<PathBuf>,
) -> Outcome {
    ensure(k >= 4, || format!("--k must be at least 4, got {k}"))?;
    ensure(bits >= 64, || format!("--bits must be at least 64, got {bits}"))?;
    ensure(l_max >= 1 && j_max >= 1, || {
        "--l-max and --j-max must be positive".to_string()
    })?;
    let m = match m {
        Some(s) => s
            .parse::<BigInt>()
            .map_err(|_| usage(format!("--m '{s}' is not an integer")))?,
        None => lemma_bound(k)?,
    };
    ensure(m >= BigInt::from(1), || "--m must be positive".to_string())?;
    let spec = SweepSpec::new(case, k, l_max, j_max, &m, bits);
    let result = match cells {
        Some(path) => {
            let cursor = path.with_extension("cursor");
            reduction_sweep_to_file_with(&spec, &path, &cursor, ctx.cache.as_ref())?
        }
        None => reduction_sweep_with(&spec, &Ladder::for_spec(&spec, ctx.cache.as_ref())?)?,
    };
    let out = ReduceOutput {
        cells: result.cells.len(),
        failed: result.failed,
        binding_max: result.binding_max(),
        max_by_variant: result.max_by_variant,
        spec,
    };
    ctx.emit_json(&out)?;
    if out.failed > 0 {
        eprintln!("{} cell(s) could not be reduced", out.failed);
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

fn cmd_pipeline(ctx: &Ctx, k: u32, bits: u32) -> Outcome {
    ensure(k >= 4, || format!("--k must be at least 4, got {k}"))?;
    ensure(bits >= 64, || format!("--bits must be at least 64, got {bits}"))?;
    let rep = final_n_bound_after_reduction_with(k, bits, ctx.cache.as_ref())?;
    ctx.emit_json(&rep)?;
    match rep.n_bound {
        None => {
            eprintln!("{} cell(s) could not be reduced", rep.failed_cells);
            Ok(EXIT_FAILURE)
        }
        Some(n) => Ok(status(n > EXPECTED_N_BOUND)),
    }
}

#[derive(Serialize)]
struct OrderReport {
    k: u32,
    solutions: usize,
    nonzero_c: Vec<String>,
    by_family: std::collections::BTreeMap<Family, usize>,
    sporadic: Vec<SolutionRecord>,
    /// Found by search but not among the verified family instances.
    outside_families: Vec<SolutionRecord>,
    /// Verified family instances in range that search did not find.
    missed_by_search: Vec<FamilyInstance>,
    /// Family instances that failed verification, all forms included.
    unverified_instances: Vec<FamilyInstance>,
}

#[derive(Serialize)]
struct Report {
    k_min: u32,
    k_max: u32,
    n_max: i64,
    mode: SearchMode,
    modulus: String,
    orders: Vec<OrderReport>,
    sporadic_total: usize,
    search_within_families: bool,
    families_within_search: bool,
}

fn cmd_report(ctx: &Ctx, cfg: &SearchConfig) -> Outcome {
    let recs = search(cfg)?;
    let mut orders = Vec::new();
    for k in cfg.k_min..=cfg.k_max {
        let fam = family_enumerate(k, cfg.n_max)?;
        let found: Vec<&SolutionRecord> = recs.iter().filter(|r| r.k == k).collect();
        let verified: BTreeSet<(i64, i64, i64, i64)> = fam
            .iter()
            .filter(|f| f.verified)
            .map(|f| (f.n, f.m, f.n1, f.m1))
            .collect();
        let found_tuples: BTreeSet<(i64, i64, i64, i64)> = found.iter().map(|r| r.tuple()).collect();
        let mut by_family = std::collections::BTreeMap::new();
        for r in &found {
            *by_family.entry(r.family).or_insert(0) += 1;
        }
        let nonzero: BTreeSet<BigInt> = found
            .iter()
            .filter(|r| r.c != BigInt::from(0))
            .map(|r| r.c.clone())
            .collect();
        orders.push(OrderReport {
            k,
            solutions: found.len(),
            nonzero_c: nonzero.iter().map(|c| c.to_string()).collect(),
            by_family,
            sporadic: found
                .iter()
                .filter(|r| r.family == Family::Sporadic)
                .map(|r| (*r).clone())
                .collect(),
            outside_families: found
                .iter()
                .filter(|r| !verified.contains(&r.tuple()))
                .map(|r| (*r).clone())
                .collect(),
            missed_by_search: fam
                .iter()
                .filter(|f| f.verified && !found_tuples.contains(&(f.n, f.m, f.n1, f.m1)))
                .cloned()
                .collect(),
            unverified_instances: fam.iter().filter(|f| !f.verified).cloned().collect(),
        });
    }
    let sporadic_total = orders.iter().map(|o| o.sporadic.len()).sum();
    let report = Report {
        k_min: cfg.k_min,
        k_max: cfg.k_max,
        n_max: cfg.n_max,
        mode: cfg.mode,
        modulus: cfg.modulus.to_string(),
        search_within_families: orders.iter().all(|o| o.outside_families.is_empty()),
        families_within_search: orders.iter().all(|o| o.missed_by_search.is_empty()),
        orders,
        sporadic_total,
    };
    ctx.emit_json(&report)?;
    let ok = sporadic_total == 0 && report.search_within_families && report.families_within_search;
    eprintln!(
        "orders {}..={}: {} solutions, {} sporadic, search within families: {}, families within search: {}",
        cfg.k_min,
        cfg.k_max,
        recs.len(),
        sporadic_total,
        report.search_within_families,
        report.families_within_search
    );
    Ok(status(!ok))
}
