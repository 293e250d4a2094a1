//! Command implementations behind the `levelscope` binary. Each command
//! returns its report text and exit code so it can be driven in-process.

pub mod error;
pub mod record;
pub mod report;
pub mod sweep;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use levelscope::{
    level_chain_with, level_lower_bound, CartierData, CurveModel, Execution, LevelConfig,
    LevelResult, ModelKind, MultiPoly, PrimeField,
};

pub use error::{code, CliError};
use record::RunRecord;
use sweep::{SweepFamily, SweepPlan};

#[derive(Debug, Parser)]
#[command(
    name = "levelscope",
    version,
    about = "Frobenius levels and Cartier–Manin data over F_p"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Level of a homogeneous polynomial.
    Level(LevelArgs),
    /// Cartier–Manin matrix and classification of y^2 = h(x).
    Classify(ClassifyArgs),
    /// Sweep a curve family over a prime range into a CSV or JSON-lines file.
    Sweep(SweepArgs),
    /// Recompute the published examples and compare.
    #[command(name = "paper-report")]
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct LevelArgs {
    #[arg(long)]
    pub prime: u64,
    #[arg(long)]
    pub poly: String,
    /// Comma-separated variable names.
    #[arg(long, default_value = "x,y,z")]
    pub vars: String,
    #[arg(long, default_value_t = levelscope::limits::DEFAULT_MAX_LEVEL)]
    pub max_e: u32,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub prime: u64,
    /// Right-hand side h(x).
    #[arg(long)]
    pub h: String,
    #[arg(long)]
    pub genus: Option<u32>,
    /// Also compute the level of the imaginary model.
    #[arg(long)]
    pub with_level: bool,
    #[arg(long, default_value_t = levelscope::limits::DEFAULT_MAX_LEVEL)]
    pub max_e: u32,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// mu_x, mu_const or random.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub genus: u32,
    /// Inclusive range LO..HI.
    #[arg(long)]
    pub primes: String,
    #[arg(long, default_value_t = 1)]
    pub mu: u64,
    /// Curves per prime (random family).
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub resume: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, default_value_t = levelscope::limits::DEFAULT_MAX_LEVEL)]
    pub max_e: u32,
    #[arg(long, default_value_t = 6)]
    pub max_genus: u32,
    /// Store wall times (makes files differ between runs).
    #[arg(long)]
    pub record_timings: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, default_value_t = levelscope::limits::DEFAULT_MAX_LEVEL)]
    pub max_e: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: code::OK,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Level(a) => cmd_level(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Report(a) => cmd_report(a),
    }
}

fn json_line(r: &RunRecord) -> String {
    let mut s = serde_json::to_string(r).expect("records serialize");
    s.push('\n');
    s
}

fn write_chain(out: &mut String, res: &LevelResult, vars: &[&str]) {
    for (i, j) in res.chain.iter().enumerate() {
        let _ = writeln!(out, "  J_{} = {}", i + 1, j.to_string_with(vars));
    }
}

fn level_line(res: &LevelResult, max_e: u32) -> String {
    match res.level {
        Some(l) => format!("level: {l}"),
        None => format!("level: not reached in {max_e} steps (capped)"),
    }
}

pub fn cmd_level(a: &LevelArgs) -> Result<Outcome, CliError> {
    let field = PrimeField::new(a.prime)?;
    let vars: Vec<&str> = a.vars.split(',').map(str::trim).collect();
    let f = MultiPoly::parse(&a.poly, field, &vars)?;
    let cfg = LevelConfig {
        max_e: a.max_e,
        execution: Execution::default(),
    };
    let res = level_chain_with(&f, &cfg)?;
    let stdout = if a.json {
        json_line(&RunRecord::from_level(&res, &vars))
    } else {
        let mut s = format!("f = {} over F_{}\n", f.to_string_with(&vars), a.prime);
        s.push_str(&level_line(&res, a.max_e));
        s.push_str("\nchain:\n");
        write_chain(&mut s, &res, &vars);
        let _ = writeln!(s, "time: {:.3} ms", res.total_ms());
        s
    };
    Ok(Outcome {
        stdout,
        stderr: String::new(),
        code: if res.capped { code::CAPPED } else { code::OK },
    })
}

pub fn cmd_classify(a: &ClassifyArgs) -> Result<Outcome, CliError> {
    let field = PrimeField::new(a.prime)?;
    let h = MultiPoly::parse(&a.h, field, &["x"])?;
    let curve = CurveModel::from_weierstrass(&h, a.genus)?;
    let data = CartierData::from_curve(&curve)?;
    let bound = level_lower_bound(&data).ok();
    let mut stderr = String::new();
    for w in &data.warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
    let mut level = None;
    let mut imaginary = None;
    if a.with_level {
        match curve.imaginary_model() {
            Ok(m) => {
                let cfg = LevelConfig {
                    max_e: a.max_e,
                    execution: Execution::default(),
                };
                level = Some(level_chain_with(&m.homogenize(), &cfg)?);
                imaginary = Some(m);
            }
            Err(levelscope::Error::InvalidCurve(msg)) => {
                let _ = writeln!(stderr, "level: {msg}");
            }
            Err(e) => return Err(e.into()),
        }
    }
    let capped = level.as_ref().is_some_and(|r| r.capped);
    let stdout = if a.json {
        let model = imaginary.as_ref().unwrap_or(&curve);
        let mut r = RunRecord::from_curve(model, &data, bound, level.as_ref());
        r.seed = None;
        json_line(&r)
    } else {
        let mut s = String::new();
        let kind = match curve.kind {
            ModelKind::Imaginary => "imaginary",
            ModelKind::Real => "real",
        };
        let _ = writeln!(s, "curve: {curve} (genus {}, {kind} model)", curve.genus);
        let _ = writeln!(s, "C = {}", data.c);
        let _ = writeln!(s, "C_ext = {}", data.c_ext);
        let _ = writeln!(s, "rank C: {}", data.rank_c);
        let _ = writeln!(s, "p-rank: {}", data.p_rank());
        match data.nilpotency {
            Some(r) => {
                let _ = writeln!(s, "nilpotency: {r}");
            }
            None => s.push_str("nilpotency: not nilpotent\n"),
        }
        let _ = writeln!(s, "class: {}", data.classification);
        match bound {
            Some(b) => {
                let _ = writeln!(s, "level bound: >= {b}");
            }
            None => s.push_str("level bound: n/a (genus 1)\n"),
        }
        if data.extended_evidence() {
            s.push_str("heuristic: C = 0 and C_ext != 0, evidence that the level exceeds 2\n");
        }
        if let (Some(res), Some(m)) = (&level, &imaginary) {
            let _ = writeln!(s, "imaginary model: {m}");
            s.push_str(&level_line(res, a.max_e));
            s.push('\n');
            write_chain(&mut s, res, &["x", "y", "z"]);
        }
        s
    };
    Ok(Outcome {
        stdout,
        stderr,
        code: if capped { code::CAPPED } else { code::OK },
    })
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<Outcome, CliError> {
    let family = SweepFamily::parse(&a.family)
        .ok_or_else(|| CliError::Usage(format!("unknown family `{}`", a.family)))?;
    let plan = SweepPlan {
        family,
        genus: a.genus,
        primes: sweep::parse_prime_range(&a.primes)?,
        mu: a.mu,
        count: a.count,
        seed: a.seed,
        max_e: a.max_e,
        max_genus: a.max_genus,
        record_timings: a.record_timings,
    };
    let summary = sweep::sweep_to_file(&plan, &a.out, a.resume, a.jobs)?;
    let mut stderr = String::new();
    for s in &summary.skipped {
        let _ = writeln!(stderr, "skipped (no valid curve): {s}");
    }
    for v in &summary.violations {
        let _ = writeln!(stderr, "BOUND VIOLATION: {v}");
    }
    for c in &summary.conjecture_counterexamples {
        let _ = writeln!(stderr, "COUNTEREXAMPLE: superspecial curve of level 2: {c}");
    }
    let stdout = format!(
        "{}: {} records ({} computed, {} reused, {} skipped, {} capped)\n",
        a.out.display(),
        summary.total,
        summary.computed,
        summary.reused,
        summary.skipped.len(),
        summary.capped
    );
    Ok(Outcome {
        stdout,
        stderr,
        code: if summary.violations.is_empty() {
            code::OK
        } else {
            code::MISMATCH
        },
    })
}

pub fn cmd_report(a: &ReportArgs) -> Result<Outcome, CliError> {
    let rows = report::run_catalog(a.max_e, Execution::default())?;
    let all = rows.iter().all(|r| r.pass);
    let mut out = Outcome::ok(report::format_table(&rows));
    if !all {
        out.code = code::MISMATCH;
    }
    Ok(out)
}
