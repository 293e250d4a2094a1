//! Fixed catalog of published examples, recomputed and compared.

use levelscope::{
    family, level_chain_with, relevant_ideal, CartierData, Classification, CurveModel, Execution,
    Family, LevelConfig, MultiPoly, Prediction, PrimeField, UniPoly,
};

use crate::error::CliError;
use crate::sweep::odd_primes_in;

const XYZ: [&str; 3] = ["x", "y", "z"];

pub const TRANSFORM_QUINTIC: &str = "y^2*z^3-x^5-2*x^3*z^2-2*x^2*z^3-x*z^4-2*z^5";
pub const TRANSFORM_SEXTIC: &str = "y^2*z^4-2*x^6+2*x^4*z^2-8*x^3*z^3+x^2*z^4-6*x*z^5-8*z^6";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub name: String,
    pub prime: u64,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Debug, Clone)]
enum Entry {
    /// `y^2 = x^5 + 2` with its level and p-rank.
    Quintic {
        p: u64,
        level: u32,
        p_rank: usize,
    },
    Polynomial {
        name: &'static str,
        p: u64,
        poly: &'static str,
        level: u32,
    },
    MuX {
        p: u64,
    },
}

fn catalog() -> Vec<Entry> {
    let mut v = vec![
        Entry::Quintic {
            p: 11,
            level: 2,
            p_rank: 2,
        },
        Entry::Quintic {
            p: 13,
            level: 4,
            p_rank: 0,
        },
        Entry::Quintic {
            p: 17,
            level: 3,
            p_rank: 0,
        },
        Entry::Polynomial {
            name: "transform quintic",
            p: 13,
            poly: TRANSFORM_QUINTIC,
            level: 3,
        },
        Entry::Polynomial {
            name: "transform sextic",
            p: 13,
            poly: TRANSFORM_SEXTIC,
            level: 2,
        },
    ];
    v.extend(odd_primes_in(7, 100).into_iter().map(|p| Entry::MuX { p }));
    v
}

fn config(max_e: u32) -> LevelConfig {
    LevelConfig {
        max_e,
        execution: Execution::Sequential,
    }
}

fn level_text(level: Option<u32>) -> String {
    level.map_or("capped".into(), |l| l.to_string())
}

fn run_entry(entry: &Entry, max_e: u32) -> Result<ReportRow, CliError> {
    match *entry {
        Entry::Quintic { p, level, p_rank } => {
            let field = PrimeField::new(p)?;
            let curve =
                CurveModel::from_unipoly(UniPoly::from_i64(field, &[2, 0, 0, 0, 0, 1]), Some(2))?;
            let data = CartierData::from_curve(&curve)?;
            let res = level_chain_with(&curve.homogenize(), &config(max_e))?;
            let mut expected = format!("level {level}, p-rank {p_rank}");
            let mut computed = format!("level {}, p-rank {}", level_text(res.level), data.p_rank());
            let mut pass = res.level == Some(level) && data.p_rank() == p_rank;
            if level == 2 {
                let m = relevant_ideal(2, field)?;
                expected.push_str(&format!(", J_1 = {m}"));
                let j1 = res.step(1).map_or("-".into(), |j| j.to_string());
                computed.push_str(&format!(", J_1 = {j1}"));
                pass &= res.step(1) == Some(&m);
            }
            Ok(ReportRow {
                name: "y^2 = x^5 + 2".into(),
                prime: p,
                expected,
                computed,
                pass,
            })
        }
        Entry::Polynomial {
            name,
            p,
            poly,
            level,
        } => {
            let f = MultiPoly::parse(poly, PrimeField::new(p)?, &XYZ)?;
            let res = level_chain_with(&f, &config(max_e))?;
            Ok(ReportRow {
                name: name.into(),
                prime: p,
                expected: format!("level {level}"),
                computed: format!("level {}", level_text(res.level)),
                pass: res.level == Some(level),
            })
        }
        Entry::MuX { p } => {
            let (curve, prediction) = family(Family::MuX, 2, 1, PrimeField::new(p)?)?;
            let data = CartierData::from_curve(&curve)?;
            let superspecial = data.classification == Classification::Superspecial;
            let predicted = prediction == Prediction::Superspecial;
            let (expected, computed, pass) = if predicted {
                let res = level_chain_with(&curve.homogenize(), &config(max_e))?;
                let level_ok = res.level.is_none_or(|l| l >= 3);
                (
                    "superspecial, C_ext != 0, level >= 3".to_string(),
                    format!(
                        "{}, C_ext {}, level {}",
                        data.classification,
                        if data.c_ext.is_zero() { "= 0" } else { "!= 0" },
                        level_text(res.level)
                    ),
                    superspecial && data.extended_evidence() && level_ok,
                )
            } else {
                (
                    "not superspecial".to_string(),
                    data.classification.to_string(),
                    !superspecial,
                )
            };
            Ok(ReportRow {
                name: "mu_x g=2 mu=1".into(),
                prime: p,
                expected,
                computed,
                pass,
            })
        }
    }
}

/// Recomputes every catalog entry.
pub fn run_catalog(max_e: u32, execution: Execution) -> Result<Vec<ReportRow>, CliError> {
    execution
        .map_owned(catalog(), |e| run_entry(&e, max_e))
        .into_iter()
        .collect()
}

pub fn format_table(rows: &[ReportRow]) -> String {
    let w_name = rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max(4);
    let w_exp = rows
        .iter()
        .map(|r| r.expected.len())
        .max()
        .unwrap_or(0)
        .max(8);
    let w_cmp = rows
        .iter()
        .map(|r| r.computed.len())
        .max()
        .unwrap_or(0)
        .max(8);
    let mut out = format!(
        "{:<w_name$}  {:>3}  {:<w_exp$}  {:<w_cmp$}  result\n",
        "case", "p", "expected", "computed"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<w_name$}  {:>3}  {:<w_exp$}  {:<w_cmp$}  {}\n",
            r.name,
            r.prime,
            r.expected,
            r.computed,
            if r.pass { "PASS" } else { "FAIL" }
        ));
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    out.push_str(&format!("{passed}/{} rows pass\n", rows.len()));
    out
}
