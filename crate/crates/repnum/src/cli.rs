//! The `repnum` command line.

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use repnum_core::arith::{arithmetic_function, prime_table, ArithFn, ArithValue};
use repnum_core::asymp::{landau_ramanujan_from, predicted_main, RatioReport, Statistic, DEFAULT_CUTOFF};
use repnum_core::moments::{
    histogram, moment, Engine, Mode, MomentQuery, OmegaFilter, OmegaKind, DEFAULT_SEGMENT,
};
use repnum_core::repr::{evaluate, Family, RepFamily, Strategy};
use repnum_core::selberg::{forms_of, PrimeSet, SieveProblem, Variant};

use crate::cache::{cache_dir, load_or_build};
use crate::constants::{Constants, ConstantsError, DEFAULT_PATH};
use crate::golden::{self, format_forms, GoldenCase};
use crate::num_fmt::real;
use crate::parallel::{default_workers, ParallelEngine};
use crate::suites::{self, Check};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "repnum", version, about = "Sums of two squares: representation counts, moments, sieve bounds")]
struct Cli {
    /// Write CSV here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Constants file.
    #[arg(long, global = true)]
    constants: Option<PathBuf>,
    /// Scan threads (default: number of processors).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Integers per scan window.
    #[arg(long = "segment-size", global = true)]
    segment_size: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One value of a representation count or arithmetic function.
    Eval(EvalArgs),
    /// Per-n values for one or more families.
    Table(TableArgs),
    /// Power or binomial moments, or empirical-vs-predicted reports.
    Moments(MomentsArgs),
    /// Number of n <= x with a nonzero count.
    Zeroth(ZerothArgs),
    /// Run verification suites; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Selberg sieve bound against the exact sifted count.
    SieveDemo(SieveArgs),
    /// Reference constants and the stored fitted constants.
    Constants(ConstantsArgs),
    /// Fit constants and write the constants file.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "what")]
struct Which {
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long, value_parser = parse_function)]
    function: Option<ArithFn>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    which: Which,
    #[arg(long)]
    n: u64,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_parser = parse_family, required = true, num_args = 1.., value_delimiter = ',')]
    family: Vec<Family>,
    #[arg(long)]
    x: u64,
    #[arg(long, default_value_t = 1)]
    from: u64,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "range")]
struct Range {
    #[arg(long)]
    x: Option<u64>,
    /// Geometric grid `lo:hi:factor`.
    #[arg(long, value_parser = parse_grid_arg)]
    grid: Option<Grid>,
}

/// Parsed `--grid`; wrapped so clap treats it as one value.
#[derive(Debug, Clone)]
struct Grid(Vec<u64>);

fn parse_grid_arg(s: &str) -> Result<Grid, String> {
    parse_grid(s).map(Grid)
}

impl Range {
    fn points(&self) -> Vec<u64> {
        match (&self.grid, self.x) {
            (Some(g), _) => g.0.clone(),
            (None, Some(x)) => vec![x],
            (None, None) => Vec::new(),
        }
    }
}

#[derive(Debug, Args)]
#[group(multiple = false, id = "filter")]
struct Filter {
    #[arg(long = "omega-star")]
    omega_star: Option<u32>,
    #[arg(long)]
    omega: Option<u32>,
}

impl Filter {
    fn get(&self) -> Option<OmegaFilter> {
        match (self.omega_star, self.omega) {
            (Some(v), _) => Some(OmegaFilter { kind: OmegaKind::OmegaStar, value: v }),
            (None, Some(v)) => Some(OmegaFilter { kind: OmegaKind::Omega, value: v }),
            _ => None,
        }
    }
}

fn filter_label(f: Option<OmegaFilter>) -> String {
    match f {
        None => String::new(),
        Some(OmegaFilter { kind: OmegaKind::OmegaStar, value }) => format!("omega_star={value}"),
        Some(OmegaFilter { kind: OmegaKind::Omega, value }) => format!("omega={value}"),
    }
}

#[derive(Debug, Args)]
struct MomentsArgs {
    #[arg(long, value_parser = parse_family, required_unless_present = "statistic")]
    family: Option<Family>,
    /// Report empirical vs predicted for a statistic such as `r1_first` or `gss_shape(1,2)`.
    #[arg(long, value_parser = parse_statistic, conflicts_with_all = ["family", "power", "binomial", "filter"])]
    statistic: Option<Statistic>,
    #[command(flatten)]
    range: Range,
    #[arg(long, conflicts_with = "binomial")]
    power: Option<u32>,
    #[arg(long)]
    binomial: Option<u32>,
    #[command(flatten)]
    filter: Filter,
    #[arg(long, value_parser = parse_strategy, default_value = "bucket")]
    strategy: Strategy,
    /// Prime cutoff for products in predicted terms.
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    cutoff: u64,
}

#[derive(Debug, Args)]
struct ZerothArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[command(flatten)]
    range: Range,
    #[command(flatten)]
    filter: Filter,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// identities, sandwich, sieve, mertens, determinism, fitted or all.
    #[arg(long, num_args = 1.., value_delimiter = ',', default_value = "all")]
    suite: Vec<String>,
    #[arg(long, default_value_t = 10_000)]
    x: u64,
    /// Golden file replayed by the sieve suite.
    #[arg(long)]
    golden: Option<PathBuf>,
    /// Random problems for the sieve suite.
    #[arg(long, default_value_t = 100)]
    problems: usize,
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SieveArgs {
    /// Replay a golden file.
    #[arg(long, conflicts_with_all = ["random", "variant"])]
    golden: Option<PathBuf>,
    /// Emit this many random problems in golden-file format.
    #[arg(long, conflicts_with = "variant")]
    random: Option<usize>,
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
    #[arg(long = "max-n", default_value_t = 2000)]
    max_n: u64,
    #[arg(long, value_parser = parse_variant, required_unless_present_any = ["golden", "random"])]
    variant: Option<Variant>,
    /// Box side N.
    #[arg(long, default_value_t = 100)]
    n: u64,
    #[arg(long, default_value_t = 1)]
    m: u64,
    /// Number of forms taken from the representations of m.
    #[arg(long, conflicts_with = "forms")]
    ell: Option<usize>,
    /// Explicit forms `r:s|r:s`.
    #[arg(long)]
    forms: Option<String>,
    #[arg(long, default_value_t = 20.0)]
    z: f64,
    #[arg(long)]
    xi: Option<f64>,
    /// `all` or `3mod4`.
    #[arg(long = "prime-set", value_parser = parse_prime_set, default_value = "all")]
    prime_set: PrimeSet,
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    cutoff: u64,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    /// Print the fitted constants without writing the file.
    #[arg(long)]
    dry_run: bool,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: repnum_core::Error| e.to_string())
}

fn parse_function(s: &str) -> Result<ArithFn, String> {
    s.parse().map_err(|e: repnum_core::Error| e.to_string())
}

fn parse_statistic(s: &str) -> Result<Statistic, String> {
    Statistic::parse(s).map_err(|e| e.to_string())
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    Variant::from_letter(s).map_err(|e| e.to_string())
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    match s {
        "bucket" => Ok(Strategy::Bucket),
        "formula" => Ok(Strategy::Formula),
        "enumerate" => Ok(Strategy::Enumerate),
        _ => Err(format!("unknown strategy `{s}` (bucket, formula, enumerate)")),
    }
}

fn parse_prime_set(s: &str) -> Result<PrimeSet, String> {
    match s {
        "all" => Ok(PrimeSet::All),
        "3mod4" => Ok(PrimeSet::ThreeMod4),
        _ => Err(format!("unknown prime set `{s}` (all, 3mod4)")),
    }
}

/// `lo:hi:factor` with `factor > 1`: `lo, lo f, lo f^2, ...` rounded, up to `hi`.
pub fn parse_grid(s: &str) -> Result<Vec<u64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, f] = parts.as_slice() else {
        return Err(format!("grid `{s}` is not lo:hi:factor"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad grid number `{t}`"));
    let (lo, hi, f) = (num(lo)?, num(hi)?, num(f)?);
    if !(lo >= 1.0 && hi >= lo && f > 1.0) {
        return Err("grid needs 1 <= lo <= hi and factor > 1".into());
    }
    let mut out: Vec<u64> = Vec::new();
    let mut i = 0;
    loop {
        let x = (lo * f.powi(i)).round();
        if x > hi {
            break;
        }
        if out.last() != Some(&(x as u64)) {
            out.push(x as u64);
        }
        i += 1;
    }
    Ok(out)
}

/// Anything that ends a command early.
#[derive(Debug)]
enum Failure {
    Core(repnum_core::Error),
    Constants(ConstantsError),
    Usage(String),
    Io(io::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Constants(e) => write!(f, "{e}"),
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(repnum_core::Error::Capacity(_)) => EXIT_CAPACITY,
            Failure::Core(repnum_core::Error::Domain(_)) | Failure::Usage(_) | Failure::Constants(_) => EXIT_USAGE,
            Failure::Core(_) | Failure::Io(_) => EXIT_FAILED,
        }
    }
}

impl From<repnum_core::Error> for Failure {
    fn from(e: repnum_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

/// Rows collected for one command.
struct Table {
    w: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(header: &[&str]) -> Result<Self, Failure> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(header)?;
        Ok(Table { w })
    }

    fn row<I, S>(&mut self, fields: I) -> Result<(), Failure>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.w.write_record(fields)?;
        Ok(())
    }

    fn finish(self) -> Result<Vec<u8>, Failure> {
        self.w.into_inner().map_err(|e| Failure::Io(io::Error::other(e.to_string())))
    }
}

struct Session {
    workers: usize,
    segment: u64,
    constants: PathBuf,
}

impl Session {
    fn scanner(&self, x_max: u64) -> Result<ParallelEngine, Failure> {
        Ok(ParallelEngine::new(Engine::with_segment(x_max, self.segment)?, self.workers))
    }

    fn load_constants(&self) -> Result<Constants, Failure> {
        Constants::load(&self.constants).map_err(Failure::Constants)
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let session = Session {
        workers: cli.workers.unwrap_or_else(default_workers).max(1),
        segment: cli.segment_size.unwrap_or(DEFAULT_SEGMENT),
        constants: cli.constants.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_PATH)),
    };
    if session.segment == 0 {
        let _ = writeln!(stderr, "repnum: --segment-size must be positive");
        return EXIT_USAGE;
    }
    let result = dispatch(&cli.command, &session, stderr);
    let (bytes, code) = match result {
        Ok(pair) => pair,
        Err(f) => {
            let _ = writeln!(stderr, "repnum: {f}");
            return f.exit_code();
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &bytes),
        None => stdout.write_all(&bytes).and_then(|_| stdout.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "repnum: {e}");
        return EXIT_FAILED;
    }
    code
}

fn dispatch(cmd: &Command, s: &Session, stderr: &mut dyn Write) -> Result<(Vec<u8>, i32), Failure> {
    let ok = |t: Table| t.finish().map(|b| (b, EXIT_OK));
    match cmd {
        Command::Eval(a) => ok(eval(a)?),
        Command::Table(a) => ok(table(a, s)?),
        Command::Moments(a) => ok(moments(a, s)?),
        Command::Zeroth(a) => ok(zeroth(a, s)?),
        Command::Verify(a) => verify(a, s),
        Command::SieveDemo(a) => sieve_demo(a),
        Command::Constants(a) => ok(constants(a, s)?),
        Command::Calibrate(a) => ok(calibrate(a, s, stderr)?),
    }
}

fn table_limit(n: u64) -> u64 {
    n.isqrt() + 1
}

fn eval(a: &EvalArgs) -> Result<Table, Failure> {
    let t = prime_table(table_limit(a.n))?;
    match (a.which.family, a.which.function) {
        (Some(family), _) => {
            let v = evaluate(family, a.n, &t)?;
            let mut out = Table::new(&["family", "n", "value"])?;
            out.row([family.name().to_string(), a.n.to_string(), v.value.to_string()])?;
            Ok(out)
        }
        (None, Some(f)) => {
            let v = arithmetic_function(f, a.n, &t)?;
            let value = match v {
                ArithValue::Int(i) => i.to_string(),
                ArithValue::Real(r) => real(r),
            };
            let mut out = Table::new(&["function", "n", "value"])?;
            out.row([f.name().to_string(), a.n.to_string(), value])?;
            Ok(out)
        }
        (None, None) => Err(Failure::Usage("give --family or --function".into())),
    }
}

fn table(a: &TableArgs, s: &Session) -> Result<Table, Failure> {
    if a.from < 1 || a.from > a.x {
        return Err(Failure::Usage("need 1 <= --from <= --x".into()));
    }
    let engine = Engine::with_segment(a.x, s.segment)?;
    let mut header = vec!["n"];
    header.extend(a.family.iter().map(|f| f.name()));
    let mut out = Table::new(&header)?;
    let mut lo = a.from;
    while lo <= a.x {
        let hi = (lo + s.segment).min(a.x + 1);
        let cols: Vec<Vec<u32>> = a
            .family
            .iter()
            .map(|&family| {
                let strategy = if family.has_formula() { Strategy::Formula } else { Strategy::Bucket };
                engine.counts(RepFamily { family, strategy }, lo, hi).map(|c| c.counts)
            })
            .collect::<Result<_, _>>()?;
        for i in 0..(hi - lo) as usize {
            let mut row = vec![(lo + i as u64).to_string()];
            row.extend(cols.iter().map(|c| c[i].to_string()));
            out.row(row)?;
        }
        lo = hi;
    }
    Ok(out)
}

fn moments(a: &MomentsArgs, s: &Session) -> Result<Table, Failure> {
    let xs = a.range.points();
    let x_max = xs.iter().copied().max().unwrap_or(1);
    let scanner = s.scanner(x_max)?;
    if let Some(stat) = a.statistic {
        let lr = landau(a.cutoff)?;
        let mut out = Table::new(&["statistic", "x", "empirical", "predicted", "ratio", "residual"])?;
        let mut sorted = xs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        for x in sorted {
            let emp = repnum_core::asymp::empirical(&scanner, stat, x)?;
            let r = RatioReport::new(stat, x, emp, predicted_main(stat, x as f64, &lr)?);
            out.row([stat.to_string(), x.to_string(), emp.to_string(), real(r.predicted), real(r.ratio), real(r.residual)])?;
        }
        return Ok(out);
    }
    let family = a.family.ok_or_else(|| Failure::Usage("--family is required".into()))?;
    let (mode, label, order) = match (a.power, a.binomial) {
        (_, Some(l)) => (Mode::Binomial(l), "binomial", l),
        (Some(k), None) => (Mode::Power(k), "power", k),
        (None, None) => (Mode::Power(1), "power", 1),
    };
    let filter = a.filter.get();
    let mut out = Table::new(&["family", "x", "mode", "order", "filter", "value"])?;
    for x in xs {
        let mut q = MomentQuery::new(family, x, mode).strategy(a.strategy);
        if let Some(f) = filter {
            q = q.filtered(f.kind, f.value);
        }
        let v = moment(&scanner, &q)?;
        out.row([family.name().to_string(), x.to_string(), label.into(), order.to_string(), filter_label(filter), v.to_string()])?;
    }
    Ok(out)
}

fn zeroth(a: &ZerothArgs, s: &Session) -> Result<Table, Failure> {
    let xs = a.range.points();
    let scanner = s.scanner(xs.iter().copied().max().unwrap_or(1))?;
    let filter = a.filter.get();
    let strategy = if a.family.has_formula() { Strategy::Formula } else { Strategy::Bucket };
    let mut out = Table::new(&["family", "x", "filter", "value"])?;
    for x in xs {
        let h = histogram(&scanner, RepFamily { family: a.family, strategy }, x, filter.map(|f| f.kind))?;
        out.row([a.family.name().to_string(), x.to_string(), filter_label(filter), h.zeroth(filter)?.to_string()])?;
    }
    Ok(out)
}

fn landau(cutoff: u64) -> Result<repnum_core::asymp::LandauRamanujan, Failure> {
    let bits = load_or_build(&cache_dir(), cutoff);
    Ok(landau_ramanujan_from(cutoff, bits.primes())?)
}

fn decades_upto(x: u64) -> Vec<u64> {
    suites::DECADES.iter().copied().filter(|&d| d <= x).collect()
}

/// `power_moment(r1, x, 2)` rows across segment sizes and worker counts.
pub fn determinism_checks(x: u64) -> Result<Vec<Check>, repnum_core::Error> {
    let mut outputs = Vec::new();
    for seg in [1u64 << 14, 1 << 20] {
        for workers in [1usize, 8] {
            let scanner = ParallelEngine::new(Engine::with_segment(x, seg)?, workers);
            let v = moment(&scanner, &MomentQuery::new(Family::R1, x, Mode::Power(2)))?;
            outputs.push((seg, workers, v));
        }
    }
    let same = outputs.iter().all(|o| o.2 == outputs[0].2);
    let detail = outputs.iter().map(|(s, w, v)| format!("seg={s},workers={w}:{v}")).collect::<Vec<_>>().join(" ");
    Ok(vec![Check {
        suite: "determinism",
        name: format!("r1_power2_x{x}"),
        passed: same,
        detail,
    }])
}

fn verify(a: &VerifyArgs, s: &Session) -> Result<(Vec<u8>, i32), Failure> {
    let mut wanted: Vec<&str> = Vec::new();
    for name in &a.suite {
        if name == "all" {
            wanted.extend(suites::SUITES);
        } else if let Some(&known) = suites::SUITES.iter().find(|&&k| k == name) {
            wanted.push(known);
        } else {
            return Err(Failure::Usage(format!("unknown suite `{name}` ({}, all)", suites::SUITES.join(", "))));
        }
    }
    wanted.dedup();
    let constants = if wanted.contains(&"fitted") { Some(s.load_constants()?) } else { None };
    let scanner = s.scanner(a.x)?;
    let mut checks = Vec::new();
    for suite in wanted {
        match suite {
            "identities" => checks.extend(suites::identities(&scanner, a.x)?),
            "sandwich" => checks.extend(suites::sandwich(&scanner, &decades_upto(a.x))?),
            "sieve" => {
                let mut cases: Vec<(SieveProblem, Option<u64>)> =
                    golden::random_problems(a.seed, a.problems, 2000).into_iter().map(|p| (p, None)).collect();
                if let Some(path) = &a.golden {
                    let text = std::fs::read_to_string(path)?;
                    let parsed = golden::parse(&text).map_err(|e| Failure::Usage(e.to_string()))?;
                    cases.extend(suites::golden_inputs(&parsed));
                }
                checks.extend(suites::sieve_cases(&cases)?);
            }
            "mertens" => checks.extend(suites::mertens(a.x)?),
            "determinism" => checks.extend(determinism_checks(a.x)?),
            "fitted" => {
                let c = constants.as_ref().expect("loaded above");
                checks.extend(suites::fitted(&scanner, c, a.x)?.map_err(Failure::Constants)?);
            }
            _ => unreachable!("suite names are validated"),
        }
    }
    let mut out = Table::new(&["suite", "check", "status", "detail"])?;
    for c in &checks {
        out.row([c.suite, c.name.as_str(), if c.passed { "PASS" } else { "FAIL" }, c.detail.as_str()])?;
    }
    let code = if checks.iter().all(|c| c.passed) { EXIT_OK } else { EXIT_FAILED };
    Ok((out.finish()?, code))
}

fn sieve_row(out: &mut Table, p: &SieveProblem, expected: Option<u64>) -> Result<bool, Failure> {
    let bound = p.sieve_upper_bound()?;
    let exact = p.sifted_count_exact()?;
    let hr = p.halberstam_richert_main()?;
    let ok = bound.value() >= exact as f64 && expected.is_none_or(|e| e == exact);
    out.row([
        p.variant.letter().to_string(),
        p.n_box.to_string(),
        real(p.z),
        real(p.xi),
        p.m.to_string(),
        p.ell().to_string(),
        format_forms(&p.forms),
        real(p.kappa()),
        real(repnum_core::selberg::to_f64(&bound.g_total)),
        real(repnum_core::selberg::to_f64(&bound.main)),
        real(repnum_core::selberg::to_f64(&bound.remainder)),
        real(bound.value()),
        exact.to_string(),
        real(hr),
        expected.map_or(String::new(), |e| e.to_string()),
    ])?;
    Ok(ok)
}

const SIEVE_HEADER: [&str; 15] = [
    "variant", "N", "z", "xi", "m", "ell", "forms", "kappa", "G", "main", "remainder", "bound", "exact", "hr_main",
    "expected",
];

fn sieve_demo(a: &SieveArgs) -> Result<(Vec<u8>, i32), Failure> {
    if let Some(count) = a.random {
        let mut text = String::from("# variant,N,z,xi,m,ell,forms,expected\n");
        for p in golden::random_problems(a.seed, count, a.max_n) {
            let expected = p.sifted_count_exact()?;
            text.push_str(&golden::format_case(&GoldenCase { problem: p, expected }));
            text.push('\n');
        }
        return Ok((text.into_bytes(), EXIT_OK));
    }
    let mut out = Table::new(&SIEVE_HEADER)?;
    if let Some(path) = &a.golden {
        let text = std::fs::read_to_string(path)?;
        let cases = golden::parse(&text).map_err(|e| Failure::Usage(e.to_string()))?;
        let mut all_ok = true;
        for c in &cases {
            all_ok &= sieve_row(&mut out, &c.problem, Some(c.expected))?;
        }
        return Ok((out.finish()?, if all_ok { EXIT_OK } else { EXIT_FAILED }));
    }
    let variant = a.variant.ok_or_else(|| Failure::Usage("--variant is required".into()))?;
    let forms = match (&a.forms, a.ell) {
        (Some(f), _) => golden::parse_forms(f).map_err(Failure::Usage)?,
        (None, ell) => {
            let pool = forms_of(a.m);
            let ell = ell.unwrap_or(pool.len().min(3));
            if ell > pool.len() {
                return Err(Failure::Usage(format!("m = {} has only {} forms", a.m, pool.len())));
            }
            pool[..ell].to_vec()
        }
    };
    let p = SieveProblem::new(variant, a.n, a.m, forms, a.prime_set, a.z)?.with_xi(a.xi.unwrap_or(a.z))?;
    let ok = sieve_row(&mut out, &p, None)?;
    Ok((out.finish()?, if ok { EXIT_OK } else { EXIT_FAILED }))
}

fn constants(a: &ConstantsArgs, s: &Session) -> Result<Table, Failure> {
    let lr = landau(a.cutoff)?;
    let mut out = Table::new(&["key", "value", "provenance"])?;
    let c = a.cutoff;
    let reference = [
        ("prod_3mod4", lr.product, format!("prod over p=3 mod 4, p<={c} of (1-p^-2)")),
        ("landau_ramanujan", lr.value, format!("(2 prod)^(-1/2), cutoff {c}")),
        ("landau_ramanujan_tail_bound", lr.tail_bound, "bound on |log(true/partial)|".to_string()),
        ("c_R", lr.c_r(), "(pi/4) prod^(-1/2)".to_string()),
        ("c_Rprime", lr.c_r_prime(), "(3 pi/8) prod^(1/2)".to_string()),
        ("M0star", lr.m0_star(), "(3/2) (prod/2)^(1/2)".to_string()),
    ];
    for (k, v, p) in reference {
        out.row([k.to_string(), real(v), p])?;
    }
    match Constants::load(&s.constants) {
        Ok(stored) => {
            for (k, e) in stored.entries() {
                out.row([k.to_string(), real(e.value), e.provenance.clone()])?;
            }
        }
        Err(ConstantsError::Missing(_)) => {}
        Err(e) => return Err(Failure::Constants(e)),
    }
    Ok(out)
}

fn calibrate(a: &CalibrateArgs, s: &Session, stderr: &mut dyn Write) -> Result<Table, Failure> {
    let scanner = s.scanner(*suites::DECADES.last().expect("non-empty"))?;
    let c = suites::calibrate(&scanner)?;
    if !a.dry_run {
        write_constants(&c, &s.constants)?;
        let _ = writeln!(stderr, "repnum: wrote {}", s.constants.display());
    }
    let mut out = Table::new(&["key", "value", "provenance"])?;
    for (k, e) in c.entries() {
        out.row([k.to_string(), real(e.value), e.provenance.clone()])?;
    }
    Ok(out)
}

fn write_constants(c: &Constants, path: &Path) -> Result<(), Failure> {
    let mut text = String::from("# repnum fitted constants; written by `repnum calibrate`\n");
    text.push_str(&c.to_string());
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1000:100000:10").unwrap(), [1000, 10_000, 100_000]);
        assert_eq!(parse_grid("10:40:2").unwrap(), [10, 20, 40]);
        assert!(parse_grid("10:5:2").is_err());
        assert!(parse_grid("10:50:1").is_err());
        assert!(parse_grid("10:50").is_err());
    }
}
