//! Command-line front end: `gen`, `verify`, `weight` and `degrees`.
//!
//! Everything is computed on exact rationals; decimals appear only in the
//! weight CSV.

mod decimal;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use decimal::render_decimal;

use crate::admissibility::{admissibility_report, orthogonality_reports, verify_admissibility, NormTable};
use crate::error::Error;
use crate::operator::{intertwining_holds, overlap_wronskian_holds, factorization_reports, verify_eigen_in, CdtStep};
use crate::polyring::{format_rat, rat, Poly, Rat};
use crate::report::{all_pass, CheckKind, CheckReport};
use crate::xfamily::{recursive_family, tau, FamilyJson, FamilyKey, KeyJson, XFamily};

#[derive(Parser, Debug)]
#[command(name = "xlegendre", version, about = "Exact exceptional Legendre families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write tau and P_{m;i} (with norms when admissible) as JSON or CSV.
    Gen(GenArgs),
    /// Run verification suites and print a JSON report.
    Verify(VerifyArgs),
    /// Sample the weight 1/tau^2 on a uniform grid over [-1, 1].
    Weight(WeightArgs),
    /// Predicted and actual degrees, and the set of missing degrees.
    Degrees(DegreesArgs),
}

#[derive(Args, Debug, Clone)]
pub struct KeyArgs {
    /// Deformed levels, comma separated (may be empty).
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub m: String,
    /// Rational parameters such as `2,-8/5`, one per level.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub t: String,
}

impl KeyArgs {
    pub fn key(&self) -> Result<FamilyKey, Error> {
        FamilyKey::parse(&self.m, &self.t)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub key: KeyArgs,
    /// Index range `a..b` (inclusive) or a single index.
    #[arg(long = "i", default_value = "0..5")]
    pub range: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub key: KeyArgs,
    #[arg(long, default_value_t = 10)]
    pub max_i: usize,
    /// Comma list from eigen, ortho, factor, recur, degree, all.
    #[arg(long, default_value = "all")]
    pub suites: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct WeightArgs {
    #[command(flatten)]
    pub key: KeyArgs,
    #[arg(long, default_value_t = 1001)]
    pub samples: usize,
    /// Significant digits in the decimal output.
    #[arg(long, default_value_t = 17)]
    pub precision: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DegreesArgs {
    #[command(flatten)]
    pub key: KeyArgs,
    #[arg(long, default_value_t = 12)]
    pub max_i: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Process exit status.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass = 0,
    Failure = 1,
    InvalidInput = 2,
    Inadmissible = 3,
}

impl Outcome {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Inadmissible(String),
    Io(io::Error),
    Internal(String),
}

impl CliError {
    pub fn outcome(&self) -> Outcome {
        match self {
            CliError::Inadmissible(_) => Outcome::Inadmissible,
            CliError::Internal(_) => Outcome::Failure,
            CliError::Input(_) | CliError::Io(_) => Outcome::InvalidInput,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(s) => write!(f, "invalid input: {s}"),
            CliError::Inadmissible(s) => write!(f, "{s}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Internal(s) => write!(f, "{s}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidRational(_) | Error::InvalidKey(_) | Error::Precondition(_) => CliError::Input(e.to_string()),
            Error::Inadmissible => CliError::Inadmissible(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Output goes to `--out` when given, else to `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { Outcome::InvalidInput.code() } else { 0 };
        }
    };
    match execute(&cli.command, stdout) {
        Ok(o) => o.code(),
        Err(e) => {
            let _ = writeln!(stderr, "xlegendre: {e}");
            e.outcome().code()
        }
    }
}

pub fn execute(command: &Command, stdout: &mut dyn Write) -> CliResult<Outcome> {
    match command {
        Command::Gen(a) => with_output(&a.out, stdout, |w| cmd_gen(a, w)),
        Command::Verify(a) => with_output(&a.out, stdout, |w| cmd_verify(a, w)),
        Command::Weight(a) => with_output(&a.out, stdout, |w| cmd_weight(a, w)),
        Command::Degrees(a) => with_output(&a.out, stdout, |w| cmd_degrees(a, w)),
    }
}

fn with_output(
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> CliResult<Outcome>,
) -> CliResult<Outcome> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            let o = f(&mut w)?;
            w.flush()?;
            Ok(o)
        }
        None => f(stdout),
    }
}

/// `"a..b"` (inclusive) or `"k"`.
pub fn parse_range(s: &str) -> CliResult<RangeInclusive<usize>> {
    let num = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Input(format!("bad index range {s:?}")))
    };
    let r = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.trim_start_matches('='))?,
        None => {
            let k = num(s)?;
            k..=k
        }
    };
    if r.is_empty() {
        return Err(CliError::Input(format!("empty index range {s:?}")));
    }
    Ok(r)
}

fn cmd_gen(a: &GenArgs, w: &mut dyn Write) -> CliResult<Outcome> {
    let key = a.key.key()?;
    let range = parse_range(&a.range)?;
    let family = XFamily::new(&key);
    let admissible = verify_admissibility(family.key())?;
    let norms = if admissible {
        Some(NormTable::for_family(&family, range.clone())?.values())
    } else {
        None
    };
    match a.format {
        Format::Json => {
            let doc = FamilyJson::from_family(&family, range, norms.as_deref(), Some(admissible));
            serde_json::to_writer_pretty(&mut *w, &doc)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(["poly", "i", "degree", "norm", "power", "coeff"])?;
            let mut rows = |name: &str, i: String, p: &Poly, norm: String| -> CliResult<()> {
                let deg = p.degree().map(|d| d.to_string()).unwrap_or_default();
                for (k, c) in p.coeffs().iter().enumerate() {
                    csv.write_record([name, &i, &deg, &norm, &k.to_string(), &format_rat(c)])?;
                }
                Ok(())
            };
            rows("tau", String::new(), family.tau(), String::new())?;
            for (j, i) in range.enumerate() {
                let norm = norms.as_ref().map(|n| format_rat(&n[j])).unwrap_or_default();
                rows("P", i.to_string(), &family.poly(i), norm)?;
            }
            csv.flush()?;
        }
        Format::Text => return Err(CliError::Input("gen writes json or csv".into())),
    }
    Ok(Outcome::Pass)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Eigen,
    Ortho,
    Factor,
    Recur,
    Degree,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Eigen, Suite::Ortho, Suite::Factor, Suite::Recur, Suite::Degree];
}

pub fn parse_suites(s: &str) -> CliResult<Vec<Suite>> {
    let mut out = Vec::new();
    for name in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let add: &[Suite] = match name {
            "all" => &Suite::ALL,
            "eigen" => &[Suite::Eigen],
            "ortho" => &[Suite::Ortho],
            "factor" => &[Suite::Factor],
            "recur" => &[Suite::Recur],
            "degree" => &[Suite::Degree],
            _ => return Err(CliError::Input(format!("unknown suite {name:?}"))),
        };
        for s in add {
            if !out.contains(s) {
                out.push(*s);
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Input("no suites selected".into()));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub key: KeyJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub original_key: Option<KeyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub admissible: bool,
    pub suites: Vec<Suite>,
    pub max_i: usize,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
}

/// Runs the selected suites. An inadmissible key together with the `ortho`
/// suite is an error.
pub fn verify_report(key: &FamilyKey, max_i: usize, suites: &[Suite]) -> std::result::Result<VerifyReport, Error> {
    let family = XFamily::new(key);
    let canon = family.key().clone();
    let admissible = verify_admissibility(&canon)?;
    if suites.contains(&Suite::Ortho) && !admissible {
        return Err(Error::Inadmissible);
    }
    let mut checks = Vec::new();
    for suite in suites {
        match suite {
            Suite::Eigen => checks.extend(eigen_reports(&family, max_i)),
            Suite::Ortho => {
                checks.push(admissibility_report(&canon));
                checks.extend(orthogonality_reports(&family, max_i)?);
            }
            Suite::Factor => checks.extend(operator_reports(&canon, max_i)?),
            Suite::Recur => checks.extend(recursion_reports(&family, max_i)),
            Suite::Degree => checks.extend(degree_reports(&family, max_i)),
        }
    }
    let note = family.was_canonicalized().then(|| {
        format!(
            "key canonicalized (duplicate levels merged, zero parameters dropped): {} -> {}",
            family.original_key(),
            canon
        )
    });
    Ok(VerifyReport {
        key: (&canon).into(),
        original_key: family.was_canonicalized().then(|| family.original_key().into()),
        note,
        admissible,
        suites: suites.to_vec(),
        max_i,
        pass: all_pass(&checks),
        checks,
    })
}

pub fn eigen_reports(family: &XFamily, max_i: usize) -> Vec<CheckReport> {
    (0..=max_i)
        .map(|i| {
            CheckReport::new(
                CheckKind::Eigen,
                format!("T(tau) P_{{m;{i}}} = {} P_{{m;{i}}}", -((i * (i + 1)) as i64)),
                family.key(),
                Some(i),
                verify_eigen_in(family, i),
            )
        })
        .collect()
}

/// Factorization and intertwining for each single step inside the key.
pub fn operator_reports(key: &FamilyKey, max_i: usize) -> std::result::Result<Vec<CheckReport>, Error> {
    let mut out = Vec::new();
    for &m in key.m() {
        let step = CdtStep::new(key, m)?;
        out.extend(factorization_reports(&step, step.default_probe_degree()));
        for i in (0..=max_i).filter(|&i| i != m) {
            let detail = format!("step m={m} t={}", format_rat(&step.t));
            let pairs = [
                ("(lambda_i - lambda_m) pi_{m;i} = B(pi_m,tau_m) A(tau,pi_m) pi_i", intertwining_holds(&step, i)),
                ("(lambda_i - lambda_m) rho_im = (1-z^2) A(tau,pi_m) pi_i / tau", overlap_wronskian_holds(&step, i)),
            ];
            for (name, r) in pairs {
                let report = match r {
                    Ok(pass) => CheckReport::new(CheckKind::Intertwining, name, key, Some(i), pass).with_detail(detail.clone()),
                    Err(e) => CheckReport::new(CheckKind::Intertwining, name, key, Some(i), false).with_detail(e.to_string()),
                };
                out.push(report);
            }
        }
    }
    Ok(out)
}

/// Determinant against recursion, and (for merged keys) the raw key's
/// recursion and determinant against the canonical family.
pub fn recursion_reports(family: &XFamily, max_i: usize) -> Vec<CheckReport> {
    let key = family.key();
    let mut out = Vec::new();
    let mut compare = |label: &str, source: &FamilyKey| match recursive_family(source, max_i) {
        Ok(rec) => {
            out.push(CheckReport::new(CheckKind::Recursion, format!("tau: {label}"), key, None, &rec.tau == family.tau()));
            for (i, p) in &rec.xpolys {
                out.push(CheckReport::new(
                    CheckKind::Recursion,
                    format!("P_{{m;{i}}}: {label}"),
                    key,
                    Some(*i),
                    *p == family.poly(*i),
                ));
            }
        }
        Err(e) => out.push(CheckReport::new(CheckKind::Recursion, label, key, None, false).with_detail(e.to_string())),
    };
    compare("determinant = recursion", key);
    if family.was_canonicalized() {
        let raw = family.original_key().clone();
        compare("merged key = recursion on the key as given", &raw);
        out.push(CheckReport::new(
            CheckKind::Recursion,
            "tau: merged key = determinant on the key as given",
            key,
            None,
            &tau(&raw) == family.tau(),
        ));
    }
    out
}

pub fn degree_reports(family: &XFamily, max_i: usize) -> Vec<CheckReport> {
    let table = degree_table(family, max_i);
    let key = family.key();
    let mut out: Vec<CheckReport> = table
        .rows
        .iter()
        .map(|r| {
            CheckReport::new(
                CheckKind::Degree,
                format!("deg P_{{m;{}}} = {}", r.i, r.predicted),
                key,
                Some(r.i),
                Some(r.predicted) == r.actual,
            )
        })
        .collect();
    out.push(
        CheckReport::new(
            CheckKind::Degree,
            "number of missing degrees = deg tau",
            key,
            None,
            table.missing_matches_codimension(),
        )
        .with_detail(format!("missing {:?}, deg tau {}", table.missing, table.tau_degree)),
    );
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeRow {
    pub i: usize,
    pub predicted: usize,
    pub actual: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeTable {
    pub key: KeyJson,
    pub tau_degree: usize,
    pub rows: Vec<DegreeRow>,
    /// From the actual degrees of every `P_{m;i}` that can land below the
    /// top missing degree.
    pub missing: Vec<usize>,
}

impl DegreeTable {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(|r| Some(r.predicted) == r.actual) && self.missing_matches_codimension()
    }

    pub fn missing_matches_codimension(&self) -> bool {
        self.missing.len() == self.tau_degree
    }
}

pub fn degree_table(family: &XFamily, max_i: usize) -> DegreeTable {
    let key = family.key();
    let rows = (0..=max_i)
        .map(|i| DegreeRow {
            i,
            predicted: family.expected_degree(i),
            actual: family.poly(i).degree(),
        })
        .collect();
    // Past i = top every degree exceeds top, so the window [0, top] is complete.
    let top = key.codimension() + key.m().iter().copied().max().unwrap_or(0);
    let mut hit = vec![false; top + 1];
    for i in 0..=top {
        if let Some(d) = family.poly(i).degree().filter(|&d| d <= top) {
            hit[d] = true;
        }
    }
    DegreeTable {
        key: key.into(),
        tau_degree: family.tau().degree().unwrap_or(0),
        rows,
        missing: (0..=top).filter(|&d| !hit[d]).collect(),
    }
}

fn cmd_verify(a: &VerifyArgs, w: &mut dyn Write) -> CliResult<Outcome> {
    let key = a.key.key()?;
    let suites = parse_suites(&a.suites)?;
    let report = verify_report(&key, a.max_i, &suites)?;
    serde_json::to_writer_pretty(&mut *w, &report)?;
    writeln!(w)?;
    Ok(if report.pass { Outcome::Pass } else { Outcome::Failure })
}

/// `(z, 1/tau(z)^2)` on `samples` equally spaced points from -1 to 1.
pub fn weight_samples(key: &FamilyKey, samples: usize) -> std::result::Result<Vec<(Rat, Rat)>, Error> {
    if samples < 2 {
        return Err(Error::Precondition("at least two samples are needed".into()));
    }
    if !verify_admissibility(key)? {
        return Err(Error::Inadmissible);
    }
    let tau = tau(&key.canonicalize());
    let steps = (samples - 1) as i64;
    Ok((0..samples as i64)
        .map(|k| {
            let z = rat(2 * k - steps, steps);
            let v = tau.evaluate(&z);
            (z, (&v * &v).recip())
        })
        .collect())
}

fn cmd_weight(a: &WeightArgs, w: &mut dyn Write) -> CliResult<Outcome> {
    let key = a.key.key()?;
    if a.precision == 0 {
        return Err(CliError::Input("precision must be positive".into()));
    }
    let data = weight_samples(&key, a.samples)?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["z", "W"])?;
    for (z, v) in &data {
        csv.write_record([render_decimal(z, a.precision), render_decimal(v, a.precision)])?;
    }
    csv.flush()?;
    Ok(Outcome::Pass)
}

fn cmd_degrees(a: &DegreesArgs, w: &mut dyn Write) -> CliResult<Outcome> {
    let key = a.key.key()?;
    let family = XFamily::new(&key);
    let table = degree_table(&family, a.max_i);
    match a.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &table)?;
            writeln!(w)?;
        }
        Format::Text => {
            writeln!(w, "key: {}", family.key())?;
            writeln!(w, "deg tau: {}", table.tau_degree)?;
            writeln!(w, "{:>4} {:>10} {:>7}", "i", "predicted", "actual")?;
            for r in &table.rows {
                let actual = r.actual.map_or("-inf".to_string(), |d| d.to_string());
                writeln!(w, "{:>4} {:>10} {:>7}", r.i, r.predicted, actual)?;
            }
            let list: Vec<String> = table.missing.iter().map(usize::to_string).collect();
            writeln!(w, "missing degrees ({}): {}", table.missing.len(), list.join(","))?;
        }
        Format::Csv => return Err(CliError::Input("degrees writes text or json".into())),
    }
    Ok(if table.all_match() { Outcome::Pass } else { Outcome::Failure })
}

/// Positions of strict interior local extrema in sampled data.
pub fn strict_local_extrema(values: &[Rat]) -> Vec<usize> {
    values
        .windows(3)
        .enumerate()
        .filter(|(_, w)| (w[1] > w[0] && w[1] > w[2]) || (w[1] < w[0] && w[1] < w[2]))
        .map(|(k, _)| k + 1)
        .collect()
}

pub fn strictly_decreasing(values: &[Rat]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}
