//! Parameter sweeps over curve families and primes, persisted as sorted
//! JSON-lines or CSV files.

use std::collections::HashSet;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use levelscope::{
    family, level_chain_with, level_lower_bound, random_curve, task_seed, CartierData,
    Classification, CurveModel, Error, Execution, Family, LevelConfig, PrimeField,
};

use crate::error::CliError;
use crate::record::{CsvRow, RecordKey, RunRecord, CSV_COLUMNS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    MuX,
    MuConst,
    Random,
}

impl SweepFamily {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "mu_x" => Some(SweepFamily::MuX),
            "mu_const" => Some(SweepFamily::MuConst),
            "random" => Some(SweepFamily::Random),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub family: SweepFamily,
    pub genus: u32,
    /// Inclusive range.
    pub primes: (u64, u64),
    pub mu: u64,
    pub count: u64,
    pub seed: u64,
    pub max_e: u32,
    pub max_genus: u32,
    /// Keep wall times; off by default so files are reproducible.
    pub record_timings: bool,
}

impl Default for SweepPlan {
    fn default() -> Self {
        SweepPlan {
            family: SweepFamily::Random,
            genus: 2,
            primes: (11, 11),
            mu: 1,
            count: 1,
            seed: 0,
            max_e: levelscope::limits::DEFAULT_MAX_LEVEL,
            max_genus: 6,
            record_timings: false,
        }
    }
}

/// Parses `LO..HI` (inclusive).
pub fn parse_prime_range(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("expected a prime range LO..HI, got `{s}`"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn odd_primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi)
        .filter(|&p| PrimeField::new(p).is_ok())
        .collect()
}

/// One (curve, prime) unit of work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub prime: u64,
    pub genus: u32,
    pub kind: TaskKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaskKind {
    Family { family: Family, mu: u64 },
    Random { seed: u64, index: u64 },
}

impl Task {
    pub fn tag(&self) -> String {
        match &self.kind {
            TaskKind::Family { family, mu } => format!("{}:mu={mu}", family.name()),
            TaskKind::Random { seed, index } => format!("random:seed={seed}:index={index}"),
        }
    }

    pub fn key(&self) -> RecordKey {
        RecordKey {
            prime: self.prime,
            genus: Some(self.genus),
            seed: self.tag(),
        }
    }

    pub fn curve(&self) -> levelscope::Result<CurveModel> {
        let field = PrimeField::new(self.prime)?;
        let curve = match &self.kind {
            TaskKind::Family { family: kind, mu } => family(*kind, self.genus, *mu, field)?.0,
            TaskKind::Random { seed, index } => {
                random_curve(self.genus, field, task_seed(*seed, *index, self.prime))?
            }
        };
        Ok(curve.with_provenance(self.tag()))
    }

    /// `Ok(None)` when the family has no valid member at this prime.
    pub fn run(&self, max_e: u32, record_timings: bool) -> Result<Option<RunRecord>, CliError> {
        let curve = match self.curve() {
            Ok(c) => c,
            Err(Error::InvalidCurve(_)) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        Ok(Some(curve_record(&curve, max_e, record_timings)?))
    }
}

/// Full record of a curve: Cartier–Manin data plus the level of its
/// imaginary model.
pub fn curve_record(
    curve: &CurveModel,
    max_e: u32,
    record_timings: bool,
) -> Result<RunRecord, CliError> {
    let data = CartierData::from_curve(curve)?;
    let bound = level_lower_bound(&data).ok();
    let cfg = LevelConfig {
        max_e,
        execution: Execution::Sequential,
    };
    let level = level_chain_with(&curve.homogenize(), &cfg)?;
    let mut record = RunRecord::from_curve(curve, &data, bound, Some(&level));
    if !record_timings {
        record.ms = 0.0;
    }
    Ok(record)
}

pub fn tasks(plan: &SweepPlan) -> Result<Vec<Task>, CliError> {
    if plan.genus > plan.max_genus {
        return Err(CliError::Usage(format!(
            "genus {} exceeds the limit {} (raise it with --max-genus)",
            plan.genus, plan.max_genus
        )));
    }
    let min_genus = if plan.family == SweepFamily::Random {
        1
    } else {
        2
    };
    if plan.genus < min_genus {
        return Err(CliError::Usage(format!(
            "genus must be at least {min_genus}"
        )));
    }
    let mut out = Vec::new();
    for p in odd_primes_in(plan.primes.0, plan.primes.1) {
        let family_task = |family| Task {
            prime: p,
            genus: plan.genus,
            kind: TaskKind::Family {
                family,
                mu: plan.mu,
            },
        };
        match plan.family {
            SweepFamily::MuX => out.push(family_task(Family::MuX)),
            SweepFamily::MuConst => out.push(family_task(Family::MuConst)),
            SweepFamily::Random => out.extend((0..plan.count).map(|index| Task {
                prime: p,
                genus: plan.genus,
                kind: TaskKind::Random {
                    seed: plan.seed,
                    index,
                },
            })),
        }
    }
    Ok(out)
}

/// Runs the tasks on `jobs` worker threads (0: one per core). Results come
/// back in task order whatever the thread count.
pub fn run_tasks(
    tasks: &[Task],
    max_e: u32,
    record_timings: bool,
    jobs: usize,
) -> Result<Vec<Option<RunRecord>>, CliError> {
    let work = |t: &Task| t.run(max_e, record_timings);
    #[cfg(feature = "parallel")]
    if jobs != 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
        return pool.install(|| tasks.par_iter().map(work).collect());
    }
    let _ = jobs;
    tasks.iter().map(work).collect()
}

/// Computes all records of a sweep, in memory.
pub fn sweep_records(plan: &SweepPlan, jobs: usize) -> Result<Vec<RunRecord>, CliError> {
    let tasks = tasks(plan)?;
    let mut records: Vec<RunRecord> = run_tasks(&tasks, plan.max_e, plan.record_timings, jobs)?
        .into_iter()
        .flatten()
        .collect();
    records.sort_by_key(|r| r.key());
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    JsonLines,
    Csv,
}

impl OutputFormat {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Ok(OutputFormat::Csv),
            Some("jsonl" | "ndjson" | "json") => Ok(OutputFormat::JsonLines),
            _ => Err(CliError::Usage(format!(
                "{}: output must end in .csv, .jsonl, .ndjson or .json",
                path.display()
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Rows {
    Json(Vec<RunRecord>),
    Csv(Vec<CsvRow>),
}

impl Rows {
    fn empty(format: OutputFormat) -> Self {
        match format {
            OutputFormat::JsonLines => Rows::Json(Vec::new()),
            OutputFormat::Csv => Rows::Csv(Vec::new()),
        }
    }

    fn keys(&self) -> HashSet<RecordKey> {
        match self {
            Rows::Json(v) => v.iter().map(RunRecord::key).collect(),
            Rows::Csv(v) => v.iter().map(CsvRow::key).collect(),
        }
    }

    fn push(&mut self, r: RunRecord) {
        match self {
            Rows::Json(v) => v.push(r),
            Rows::Csv(v) => v.push(CsvRow::from(&r)),
        }
    }

    fn sort(&mut self) {
        match self {
            Rows::Json(v) => v.sort_by_key(RunRecord::key),
            Rows::Csv(v) => v.sort_by_key(CsvRow::key),
        }
    }

    fn len(&self) -> usize {
        match self {
            Rows::Json(v) => v.len(),
            Rows::Csv(v) => v.len(),
        }
    }

    fn encode(&self) -> Result<Vec<u8>, String> {
        match self {
            Rows::Json(v) => {
                let mut out = Vec::new();
                for r in v {
                    serde_json::to_writer(&mut out, r).map_err(|e| e.to_string())?;
                    out.push(b'\n');
                }
                Ok(out)
            }
            Rows::Csv(v) => {
                let mut w = csv::WriterBuilder::new()
                    .has_headers(false)
                    .from_writer(Vec::new());
                w.write_record(CSV_COLUMNS).map_err(|e| e.to_string())?;
                for r in v {
                    w.serialize(r).map_err(|e| e.to_string())?;
                }
                w.into_inner().map_err(|e| e.to_string())
            }
        }
    }
}

fn load(path: &Path, format: OutputFormat) -> Result<Rows, CliError> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let malformed = |line, msg: String| CliError::Format {
        path: path.to_path_buf(),
        line,
        msg,
    };
    match format {
        OutputFormat::JsonLines => {
            let mut rows = Vec::new();
            for (i, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|e| CliError::io(path, e))?;
                if line.trim().is_empty() {
                    continue;
                }
                rows.push(
                    serde_json::from_str(&line).map_err(|e| malformed(i + 1, e.to_string()))?,
                );
            }
            Ok(Rows::Json(rows))
        }
        OutputFormat::Csv => {
            let mut rd = csv::Reader::from_reader(file);
            let header: Vec<String> = rd
                .headers()
                .map_err(|e| malformed(1, e.to_string()))?
                .iter()
                .map(str::to_string)
                .collect();
            if header != CSV_COLUMNS {
                return Err(malformed(1, format!("unexpected header {header:?}")));
            }
            let mut rows = Vec::new();
            for (i, row) in rd.deserialize().enumerate() {
                rows.push(row.map_err(|e: csv::Error| malformed(i + 2, e.to_string()))?);
            }
            Ok(Rows::Csv(rows))
        }
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut tmp = PathBuf::from(path);
    let name = format!(
        ".{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("sweep")
    );
    tmp.set_file_name(name);
    let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| CliError::io(&tmp, e))?;
    f.sync_all().map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepSummary {
    pub computed: usize,
    pub reused: usize,
    /// Tasks without a valid curve (e.g. `h` not squarefree at that prime).
    pub skipped: Vec<String>,
    /// Records with `level < bound`.
    pub violations: Vec<String>,
    /// Superspecial records of level 2.
    pub conjecture_counterexamples: Vec<String>,
    pub capped: usize,
    pub total: usize,
}

/// Runs a sweep into `out`. With `resume`, records already in the file are
/// kept and their tasks skipped. The file is rewritten sorted by key.
pub fn sweep_to_file(
    plan: &SweepPlan,
    out: &Path,
    resume: bool,
    jobs: usize,
) -> Result<SweepSummary, CliError> {
    let format = OutputFormat::from_path(out)?;
    let mut rows = if resume && out.exists() {
        load(out, format)?
    } else {
        Rows::empty(format)
    };
    let done = rows.keys();
    let all = tasks(plan)?;
    let todo: Vec<Task> = all
        .iter()
        .filter(|t| !done.contains(&t.key()))
        .cloned()
        .collect();
    let results = run_tasks(&todo, plan.max_e, plan.record_timings, jobs)?;
    let mut summary = SweepSummary {
        reused: all.len() - todo.len(),
        ..SweepSummary::default()
    };
    for (task, result) in todo.iter().zip(results) {
        let Some(record) = result else {
            summary
                .skipped
                .push(format!("p={} {}", task.prime, task.tag()));
            continue;
        };
        summary.computed += 1;
        audit(&record, &mut summary);
        rows.push(record);
    }
    rows.sort();
    summary.total = rows.len();
    let bytes = rows.encode().map_err(|msg| CliError::Format {
        path: out.to_path_buf(),
        line: 0,
        msg,
    })?;
    write_atomic(out, &bytes)?;
    Ok(summary)
}

fn audit(r: &RunRecord, summary: &mut SweepSummary) {
    let who = || {
        format!(
            "p={} {} h={}",
            r.prime,
            r.seed.as_deref().unwrap_or(""),
            r.h.as_deref().unwrap_or("")
        )
    };
    if r.capped {
        summary.capped += 1;
    }
    if !r.respects_bound() {
        summary.violations.push(format!(
            "{}: level {:?} < bound {:?}",
            who(),
            r.level,
            r.bound
        ));
    }
    if r.class.as_deref() == Some(Classification::Superspecial.as_str()) && r.level == Some(2) {
        summary.conjecture_counterexamples.push(who());
    }
}
