//! `rho`: command-line front end for the prefix-sum characteristics.
//!
//! Exit status: 0 on success, 1 when a check comes out negative (a bound is
//! violated, a matrix is not Hadamard, a subset beats the conjectured
//! minimum), 2 on usage, input or budget errors.

mod inputs;
mod output;

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rho_core::bounds::{
    hadamard_report, hat_rho_bounds, sylvester_report, type_p_upper, BoundReport, HatKind, Side,
};
use rho_core::characteristics::{
    f_distribution, f_exponent, hadamard_ratio, hat_rho, max_abs_alpha, rho_l1_closed_form,
    rho_profile, sylvester_diagnostics, sylvester_rho_profile, ClosedForm,
};
use rho_core::matrix::{parseval_holds, validate_hadamard};
use rho_core::report::{exact_string, ReportValue};
use rho_core::search::{
    rho_n_exhaustive, rho_n_subset_sign, ConjectureConfig, ConjectureMode, ConjectureReport,
    ConjectureSearch, PrefixChoice, Verdict,
};
use rho_core::{Budget, NormSpec, Scalar};

use inputs::{with_norm, AnyNorm, MatrixSpec};
use output::{Format, Sink};

#[derive(Parser)]
#[command(name = "rho", version, about = "Prefix-sum characteristics of Sylvester and Hadamard matrices")]
struct Cli {
    /// Report format
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Maximum number of objective evaluations for searches
    #[arg(long, global = true, value_parser = positive_u128)]
    budget: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a matrix
    Gen {
        #[arg(long, value_parser = MatrixSpec::parse)]
        matrix: MatrixSpec,
    },
    /// Check orthogonality and the Parseval identity
    Validate {
        #[arg(long, value_parser = MatrixSpec::parse)]
        matrix: MatrixSpec,
    },
    /// Column maxima of the prefix sums of S^(n)
    Alpha {
        #[arg(long)]
        n: u32,
        /// Report a single column (1-based)
        #[arg(long)]
        column: Option<usize>,
    },
    /// Profile rho(m) for m = 1..order
    Rho {
        #[arg(long, value_parser = MatrixSpec::parse)]
        matrix: MatrixSpec,
        #[arg(long, default_value = "l1")]
        norm: String,
    },
    /// Closed-form l1 maximum of S^(n) and its two maximizers
    ClosedForm {
        #[arg(long)]
        n: u32,
        /// Tabulate n..=to
        #[arg(long)]
        to: Option<u32>,
    },
    /// Lower and upper estimates, checked against computed values
    Bounds {
        /// Sylvester exponent
        #[arg(long, required_unless_present = "order", conflicts_with = "order")]
        n: Option<u32>,
        /// Hadamard order
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, default_value = "l1")]
        norm: String,
        /// Run the orbit search on the catalog representative (Hadamard orders)
        #[arg(long)]
        search: bool,
        /// Type exponent p > 1 for the type-p estimate (Sylvester only)
        #[arg(long, requires = "type_constant")]
        type_p: Option<f64>,
        /// Type constant T_p
        #[arg(long, requires = "type_p")]
        type_constant: Option<f64>,
    },
    /// Maximum of rho over Hadamard matrices of an order
    RhoN {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "l1")]
        norm: String,
        /// Defaults to exhaustive for orders up to 4, subset-sign above
        #[arg(long, value_enum)]
        mode: Option<RhoNMode>,
    },
    /// Minimum subset sum of S^(n) rows against the l1 characteristic
    Conjecture {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "branch-and-bound")]
        mode: CliConjectureMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Annealing moves
        #[arg(long, default_value_t = 100_000)]
        iterations: u64,
        #[arg(long, value_enum, default_value = "m")]
        prefix: CliPrefix,
        /// Resumable state file; an advisory `<file>.lock` guards it
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Steps between checkpoint writes
        #[arg(long, default_value_t = 1 << 22, value_parser = positive_u64)]
        checkpoint_every: u64,
        /// Stop after this many search steps (resume later from the checkpoint)
        #[arg(long, value_parser = positive_u64)]
        max_steps: Option<u64>,
    },
    /// rho-hat for random families of unit-ball vectors
    HatRho {
        #[arg(long, value_parser = MatrixSpec::parse)]
        matrix: MatrixSpec,
        #[arg(long, default_value = "l1")]
        norm: String,
        #[arg(long, default_value_t = 100)]
        families: usize,
        /// Dimension of the vectors
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Growth ratios rho^(n)/(n·2^n) and rho_n/(n·sqrt(n))
    Diagnostics {
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        #[arg(long, default_value = "l1")]
        norm: String,
        /// Hadamard orders to run the orbit search on
        #[arg(long, value_delimiter = ',')]
        orders: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RhoNMode {
    Exhaustive,
    SubsetSign,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliConjectureMode {
    ExhaustiveSubsets,
    BranchAndBound,
    Anneal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliPrefix {
    M,
    MPrime,
    Both,
}

fn positive_u128(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    positive_u128(s).and_then(|v| u64::try_from(v).map_err(|e| e.to_string()))
}

enum Outcome {
    Ok,
    /// A mathematically meaningful negative verdict.
    Negative,
}

type CmdResult = Result<Outcome, String>;

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut budget = Budget::default();
    if let Some(b) = cli.budget {
        budget = budget.with_evaluations(b);
    }
    let result = Sink::open(cli.format, cli.output.as_ref())
        .map_err(fail)
        .and_then(|mut sink| run(cli.command, &mut sink, &budget));
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, sink: &mut Sink, budget: &Budget) -> CmdResult {
    match command {
        Command::Gen { matrix } => gen(&matrix, sink, budget),
        Command::Validate { matrix } => validate(&matrix, sink, budget),
        Command::Alpha { n, column } => alpha(n, column, sink),
        Command::Rho { matrix, norm } => {
            let norm = AnyNorm::parse(&norm).map_err(fail)?;
            with_norm!(norm, |norm| rho(&matrix, &norm, sink, budget))
        }
        Command::ClosedForm { n, to } => closed_form(n, to, sink),
        Command::Bounds {
            n,
            order,
            norm,
            search,
            type_p,
            type_constant,
        } => {
            let norm = AnyNorm::parse(&norm).map_err(fail)?;
            let type_p = type_p.zip(type_constant);
            with_norm!(norm, |norm| bounds(n, order, &norm, search, type_p, sink, budget))
        }
        Command::RhoN { order, norm, mode } => {
            let norm = AnyNorm::parse(&norm).map_err(fail)?;
            with_norm!(norm, |norm| rho_n(order, &norm, mode, sink, budget))
        }
        Command::Conjecture {
            n,
            mode,
            seed,
            iterations,
            prefix,
            checkpoint,
            checkpoint_every,
            max_steps,
        } => {
            let mode = match mode {
                CliConjectureMode::ExhaustiveSubsets => ConjectureMode::ExhaustiveSubsets,
                CliConjectureMode::BranchAndBound => ConjectureMode::BranchAndBound,
                CliConjectureMode::Anneal => ConjectureMode::Anneal,
            };
            let prefixes = match prefix {
                CliPrefix::M => vec![PrefixChoice::M],
                CliPrefix::MPrime => vec![PrefixChoice::MPrime],
                CliPrefix::Both => vec![PrefixChoice::M, PrefixChoice::MPrime],
            };
            if checkpoint.is_some() && prefixes.len() > 1 {
                return Err("--checkpoint needs a single --prefix".into());
            }
            let run = ConjectureRun {
                checkpoint,
                every: checkpoint_every,
                max_steps,
            };
            let configs = prefixes
                .into_iter()
                .map(|p| {
                    ConjectureConfig::new(n, mode)
                        .with_prefix(p)
                        .with_seed(seed)
                        .with_iterations(iterations)
                        .with_budget(*budget)
                })
                .collect();
            conjecture(configs, &run, sink)
        }
        Command::HatRho {
            matrix,
            norm,
            families,
            dim,
            seed,
        } => {
            let norm = AnyNorm::float(&norm).map_err(fail)?;
            hat(&matrix, &norm, families, dim, seed, sink, budget)
        }
        Command::Diagnostics { n_max, norm, orders } => {
            let norm = AnyNorm::parse(&norm).map_err(fail)?;
            with_norm!(norm, |norm| diagnostics(n_max, &norm, &orders, sink, budget))
        }
    }
}

#[derive(Serialize)]
struct MatrixDoc {
    source: String,
    order: usize,
    rows: Vec<Vec<i8>>,
}

fn gen(spec: &MatrixSpec, sink: &mut Sink, budget: &Budget) -> CmdResult {
    let m = spec.build(budget).map_err(fail)?;
    if sink.format() == Format::Text {
        sink.text(&m.to_text())?;
        return Ok(Outcome::Ok);
    }
    let rows = m.rows();
    let doc = MatrixDoc {
        source: spec.label(),
        order: m.order(),
        rows: rows.clone(),
    };
    match sink.format() {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(fail)?;
            }
            sink.text(&String::from_utf8(w.into_inner().map_err(fail)?).map_err(fail)?)?;
        }
        _ => sink.json(&doc)?,
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct ValidateDoc {
    source: String,
    order: usize,
    hadamard: bool,
    parseval: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
}

fn validate(spec: &MatrixSpec, sink: &mut Sink, budget: &Budget) -> CmdResult {
    let m = spec.build(budget).map_err(fail)?;
    let verdict = validate_hadamard(&m);
    let beta: Vec<i64> = (1..=m.order() as i64).collect();
    let doc = ValidateDoc {
        source: spec.label(),
        order: m.order(),
        hadamard: verdict.is_ok(),
        parseval: parseval_holds(&m, &beta),
        failure: verdict.as_ref().err().map(ToString::to_string),
    };
    sink.emit(&doc, &[&doc])?;
    Ok(if doc.hadamard && doc.parseval {
        Outcome::Ok
    } else {
        Outcome::Negative
    })
}

#[derive(Serialize)]
struct AlphaRow {
    column: usize,
    f: u32,
    max_abs_alpha: u64,
}

#[derive(Serialize)]
struct AlphaDoc {
    n: u32,
    columns: Vec<AlphaRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distribution: Option<BTreeMap<u32, u64>>,
}

fn alpha(n: u32, column: Option<usize>, sink: &mut Sink) -> CmdResult {
    let row = |i: usize| -> Result<AlphaRow, String> {
        Ok(AlphaRow {
            column: i,
            f: f_exponent(n, i).map_err(fail)?,
            max_abs_alpha: max_abs_alpha(n, i).map_err(fail)?,
        })
    };
    let doc = match column {
        Some(i) => AlphaDoc {
            n,
            columns: vec![row(i)?],
            distribution: None,
        },
        None => {
            if n > 20 {
                return Err(format!("listing all 2^{n} columns is too large; pass --column"));
            }
            AlphaDoc {
                n,
                columns: (1..=1usize << n).map(row).collect::<Result<_, _>>()?,
                distribution: Some(f_distribution(n).map_err(fail)?),
            }
        }
    };
    sink.emit(&doc, &doc.columns)?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct ProfileRow {
    m: usize,
    rho: ReportValue,
}

fn rho<T: Scalar>(spec: &MatrixSpec, norm: &NormSpec<T>, sink: &mut Sink, budget: &Budget) -> CmdResult {
    let profile = match spec {
        MatrixSpec::Sylvester(n) => sylvester_rho_profile(*n, norm),
        _ => spec.build(budget).and_then(|m| rho_profile(&m, norm)),
    }
    .map_err(fail)?;
    let mut report = profile.to_report();
    report.source = spec.label();
    let rows: Vec<ProfileRow> = report
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| ProfileRow { m: i + 1, rho: v.clone() })
        .collect();
    sink.emit(&report, &rows)?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct ClosedFormRow {
    n: u32,
    value: i128,
    m: i128,
    m_prime: i128,
}

fn closed_form(n: u32, to: Option<u32>, sink: &mut Sink) -> CmdResult {
    let last = to.unwrap_or(n);
    if last < n {
        return Err(format!("--to {last} is below --n {n}"));
    }
    let forms: Vec<ClosedForm> = (n..=last)
        .map(rho_l1_closed_form)
        .collect::<Result<_, _>>()
        .map_err(fail)?;
    let rows: Vec<ClosedFormRow> = forms
        .iter()
        .zip(n..)
        .map(|(f, k)| ClosedFormRow {
            n: k,
            value: f.value,
            m: f.m,
            m_prime: f.m_prime,
        })
        .collect();
    if to.is_none() {
        sink.emit(&forms[0], &rows)?;
    } else {
        sink.emit(&rows, &rows)?;
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct BoundRow<'a> {
    name: &'a str,
    side: Side,
    value: &'a ReportValue,
    ok: Option<bool>,
}

fn emit_bounds(report: &BoundReport, sink: &mut Sink) -> Result<(), String> {
    let rows: Vec<BoundRow> = report
        .bounds
        .iter()
        .map(|b| BoundRow {
            name: &b.name,
            side: b.side,
            value: &b.value,
            ok: report.verdicts.iter().find(|v| v.name == b.name).map(|v| v.ok),
        })
        .collect();
    sink.emit(report, &rows)
}

/// Largest Sylvester exponent whose profile is computed alongside its bounds.
const SYLVESTER_CHECK_MAX: u32 = 14;

fn bounds<T: Scalar>(
    n: Option<u32>,
    order: Option<usize>,
    norm: &NormSpec<T>,
    search: bool,
    type_p: Option<(f64, f64)>,
    sink: &mut Sink,
    budget: &Budget,
) -> CmdResult {
    let report = match (n, order) {
        (Some(n), _) => {
            let mut report = sylvester_report(n, norm).map_err(fail)?;
            if let Some((p, tp)) = type_p {
                let v = type_p_upper(n, p, tp).map_err(fail)?;
                report.push("type_p", Side::Upper, ReportValue::Float(v));
            }
            if n <= SYLVESTER_CHECK_MAX {
                let rho = sylvester_rho_profile(n, norm).map_err(fail)?.rho_max;
                report.with_rho(rho.to_report())
            } else {
                report
            }
        }
        (None, Some(order)) => {
            if type_p.is_some() {
                return Err("--type-p applies to Sylvester exponents (--n)".into());
            }
            let mut report = hadamard_report(order, norm).map_err(fail)?;
            if search {
                let rep = rho_core::matrix::catalog_representative(order).map_err(fail)?;
                let w = validate_hadamard(&rep).map_err(fail)?;
                let res = rho_n_subset_sign(&w, norm, budget).map_err(fail)?;
                if res.label != "rho_n" {
                    // a class-restricted maximum only bounds rho_n from below,
                    // so lower estimates for rho_n say nothing about it
                    report.bounds.retain(|b| b.side == Side::Upper);
                }
                report = report.with_rho(res.objective.to_report());
            }
            report
        }
        (None, None) => return Err("pass --n or --order".into()),
    };
    emit_bounds(&report, sink)?;
    Ok(if report.all_ok() {
        Outcome::Ok
    } else {
        Outcome::Negative
    })
}

fn rho_n<T: Scalar>(
    order: usize,
    norm: &NormSpec<T>,
    mode: Option<RhoNMode>,
    sink: &mut Sink,
    budget: &Budget,
) -> CmdResult {
    let mode = mode.unwrap_or(if order <= 4 {
        RhoNMode::Exhaustive
    } else {
        RhoNMode::SubsetSign
    });
    let res = match mode {
        RhoNMode::Exhaustive => rho_n_exhaustive(order, norm),
        RhoNMode::SubsetSign => rho_core::matrix::catalog_representative(order)
            .and_then(|m| validate_hadamard(&m))
            .and_then(|w| rho_n_subset_sign(&w, norm, budget)),
    }
    .map_err(fail)?;
    let report = res.to_report(norm, order);
    #[derive(Serialize)]
    struct Row<'a> {
        order: usize,
        norm: &'a str,
        #[serde(with = "exact_string")]
        objective: ReportValue,
        label: &'a str,
        exact: bool,
    }
    let row = Row {
        order,
        norm: &report.norm,
        objective: report.objective.clone(),
        label: &report.label,
        exact: report.exact,
    };
    sink.emit(&report, &[row])?;
    Ok(Outcome::Ok)
}

struct ConjectureRun {
    checkpoint: Option<PathBuf>,
    every: u64,
    max_steps: Option<u64>,
}

/// Advisory lock: `<checkpoint>.lock` exists while a process owns the file.
struct LockGuard(PathBuf);

impl LockGuard {
    fn acquire(checkpoint: &Path) -> Result<Self, String> {
        let mut name = checkpoint.as_os_str().to_owned();
        name.push(".lock");
        let path = PathBuf::from(name);
        let mut f = OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
            .map_err(|e| {
                format!(
                    "cannot lock {}: {e} (another run may own the checkpoint; remove a stale lock by hand)",
                    path.display()
                )
            })?;
        writeln!(f, "{}", std::process::id()).map_err(fail)?;
        Ok(LockGuard(path))
    }
}

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

#[derive(Serialize)]
struct ConjectureDoc {
    #[serde(flatten)]
    report: ConjectureReport,
    finished: bool,
}

#[derive(Serialize)]
struct ConjectureRow {
    n: u32,
    m: usize,
    prefix: PrefixChoice,
    #[serde(with = "exact_string")]
    min: ReportValue,
    #[serde(with = "exact_string")]
    rhs: ReportValue,
    verdict: Verdict,
    exact: bool,
    finished: bool,
}

fn conjecture(configs: Vec<ConjectureConfig>, run: &ConjectureRun, sink: &mut Sink) -> CmdResult {
    let _lock = match &run.checkpoint {
        Some(p) => Some(LockGuard::acquire(p)?),
        None => None,
    };
    let mut docs = Vec::new();
    for config in configs {
        let mut search = match &run.checkpoint {
            Some(p) => ConjectureSearch::open(config, p),
            None => ConjectureSearch::new(config),
        }
        .map_err(fail)?;
        let mut taken = 0u64;
        loop {
            let chunk = match run.max_steps {
                Some(max) => run.every.min(max - taken),
                None => run.every,
            };
            let before = search.stats().nodes;
            let finished = search.step(chunk).map_err(fail)?;
            taken += (search.stats().nodes - before).max(1);
            if let Some(p) = &run.checkpoint {
                search.checkpoint().save(p).map_err(fail)?;
            }
            if finished || run.max_steps.is_some_and(|max| taken >= max) {
                break;
            }
        }
        let result = search.result().map_err(fail)?;
        docs.push(ConjectureDoc {
            report: result.to_report(),
            finished: search.is_finished(),
        });
    }
    let rows: Vec<ConjectureRow> = docs
        .iter()
        .map(|d| ConjectureRow {
            n: d.report.n,
            m: d.report.m,
            prefix: d.report.prefix,
            min: d.report.min.clone(),
            rhs: d.report.rhs.clone(),
            verdict: d.report.verdict,
            exact: d.report.exact,
            finished: d.finished,
        })
        .collect();
    let negative = docs.iter().any(|d| d.report.verdict == Verdict::Counterexample);
    if docs.len() == 1 {
        sink.emit(&docs[0], &rows)?;
    } else {
        sink.emit(&docs, &rows)?;
    }
    Ok(if negative { Outcome::Negative } else { Outcome::Ok })
}

#[derive(Serialize)]
struct HatDoc {
    source: String,
    norm: String,
    families: usize,
    dim: usize,
    seed: u64,
    max_hat_rho: f64,
    ceiling: f64,
    ceiling_kind: HatKind,
    ok: bool,
    tolerance: &'static str,
}

fn hat(
    spec: &MatrixSpec,
    norm: &NormSpec<f64>,
    families: usize,
    dim: usize,
    seed: u64,
    sink: &mut Sink,
    budget: &Budget,
) -> CmdResult {
    if families == 0 || dim == 0 {
        return Err("--families and --dim must be positive".into());
    }
    let m = spec.build(budget).map_err(fail)?;
    let (kind, ceiling) = match spec {
        MatrixSpec::Sylvester(n) => (HatKind::Sylvester, hat_rho_bounds(HatKind::Sylvester, *n as usize)),
        _ => {
            validate_hadamard(&m).map_err(fail)?;
            (HatKind::Hadamard, hat_rho_bounds(HatKind::Hadamard, m.order()))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0f64;
    for _ in 0..families {
        let mut xs = Vec::with_capacity(m.order());
        for _ in 0..m.order() {
            let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let nx = norm.eval(&x).map_err(fail)?;
            let radius: f64 = rng.gen_range(0.5..=1.0);
            xs.push(if nx > 0.0 {
                x.iter().map(|v| v / nx * radius).collect()
            } else {
                x
            });
        }
        best = best.max(hat_rho(&xs, &m, norm).map_err(fail)?.rho_max);
    }
    let doc = HatDoc {
        source: spec.label(),
        norm: norm.to_string(),
        families,
        dim,
        seed,
        max_hat_rho: best,
        ceiling,
        ceiling_kind: kind,
        ok: best <= ceiling * (1.0 + 1e-9),
        tolerance: "float:rel 1e-9",
    };
    sink.emit(&doc, &[&doc])?;
    Ok(if doc.ok { Outcome::Ok } else { Outcome::Negative })
}

#[derive(Serialize)]
struct HadamardDiag {
    order: usize,
    #[serde(with = "exact_string")]
    rho: ReportValue,
    label: String,
    ratio: f64,
}

#[derive(Serialize)]
struct DiagDoc {
    norm: String,
    sylvester: Vec<rho_core::characteristics::SylvesterDiagnostics>,
    hadamard: Vec<HadamardDiag>,
}

#[derive(Serialize)]
struct DiagRow {
    family: &'static str,
    size: usize,
    #[serde(with = "exact_string")]
    rho: ReportValue,
    ratio: f64,
}

fn diagnostics<T: Scalar>(
    n_max: u32,
    norm: &NormSpec<T>,
    orders: &[usize],
    sink: &mut Sink,
    budget: &Budget,
) -> CmdResult {
    let sylvester = (1..=n_max)
        .map(|n| sylvester_diagnostics(n, norm))
        .collect::<Result<Vec<_>, _>>()
        .map_err(fail)?;
    let mut hadamard = Vec::new();
    for &order in orders {
        let w = rho_core::matrix::catalog_representative(order)
            .and_then(|m| validate_hadamard(&m))
            .map_err(fail)?;
        let res = rho_n_subset_sign(&w, norm, budget).map_err(fail)?;
        hadamard.push(HadamardDiag {
            order,
            rho: res.objective.to_report(),
            label: res.label,
            ratio: hadamard_ratio(order, res.objective.to_f64_lossy()),
        });
    }
    let rows: Vec<DiagRow> = sylvester
        .iter()
        .map(|d| DiagRow {
            family: "sylvester",
            size: d.n as usize,
            rho: d.rho.clone(),
            ratio: d.rho_over_n2n,
        })
        .chain(hadamard.iter().map(|h| DiagRow {
            family: "hadamard",
            size: h.order,
            rho: h.rho.clone(),
            ratio: h.ratio,
        }))
        .collect();
    let doc = DiagDoc {
        norm: norm.to_string(),
        sylvester,
        hadamard,
    };
    sink.emit(&doc, &rows)?;
    Ok(Outcome::Ok)
}
