//! Run records and their JSON-lines / CSV encodings.

use std::cmp::Ordering;

use levelscope::{CartierData, CurveModel, LevelResult};
use serde::{Deserialize, Deserializer, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Makes an `Option` field required: present, possibly `null`.
fn required<'de, D, T>(d: D) -> Result<Option<T>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    Option::<T>::deserialize(d)
}

/// One computation. Curve-free runs leave the curve fields `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub prime: u64,
    #[serde(deserialize_with = "required")]
    pub genus: Option<u32>,
    #[serde(deserialize_with = "required")]
    pub h: Option<String>,
    pub poly: String,
    #[serde(deserialize_with = "required")]
    pub level: Option<u32>,
    pub capped: bool,
    /// Generators of `J_1, J_2, ...`.
    pub chain: Vec<Vec<String>>,
    #[serde(rename = "rank_C", deserialize_with = "required")]
    pub rank_c: Option<usize>,
    #[serde(deserialize_with = "required")]
    pub p_rank: Option<usize>,
    #[serde(deserialize_with = "required")]
    pub nilpotency: Option<u32>,
    #[serde(deserialize_with = "required")]
    pub class: Option<String>,
    #[serde(deserialize_with = "required")]
    pub bound: Option<u32>,
    pub ms: f64,
    pub version: String,
    #[serde(deserialize_with = "required")]
    pub seed: Option<String>,
}

/// CSV projection, columns in the fixed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub prime: u64,
    pub genus: Option<u32>,
    pub h: Option<String>,
    pub level: Option<u32>,
    pub capped: bool,
    #[serde(rename = "rank_C")]
    pub rank_c: Option<usize>,
    pub p_rank: Option<usize>,
    pub nilpotency: Option<u32>,
    pub class: Option<String>,
    pub bound: Option<u32>,
    pub ms: f64,
    pub seed: Option<String>,
}

pub const CSV_COLUMNS: [&str; 12] = [
    "prime",
    "genus",
    "h",
    "level",
    "capped",
    "rank_C",
    "p_rank",
    "nilpotency",
    "class",
    "bound",
    "ms",
    "seed",
];

impl From<&RunRecord> for CsvRow {
    fn from(r: &RunRecord) -> Self {
        CsvRow {
            prime: r.prime,
            genus: r.genus,
            h: r.h.clone(),
            level: r.level,
            capped: r.capped,
            rank_c: r.rank_c,
            p_rank: r.p_rank,
            nilpotency: r.nilpotency,
            class: r.class.clone(),
            bound: r.bound,
            ms: r.ms,
            seed: r.seed.clone(),
        }
    }
}

impl RunRecord {
    pub fn from_level(result: &LevelResult, vars: &[&str]) -> RunRecord {
        RunRecord {
            prime: result.f.field().modulus(),
            genus: None,
            h: None,
            poly: result.f.to_string_with(vars),
            level: result.level,
            capped: result.capped,
            chain: chain_strings(result, vars),
            rank_c: None,
            p_rank: None,
            nilpotency: None,
            class: None,
            bound: None,
            ms: result.total_ms(),
            version: VERSION.to_string(),
            seed: None,
        }
    }

    /// Record of a curve. `level` is absent when only the Cartier–Manin data
    /// was computed.
    pub fn from_curve(
        curve: &CurveModel,
        data: &CartierData,
        bound: Option<u32>,
        level: Option<&LevelResult>,
    ) -> RunRecord {
        let vars = ["x", "y", "z"];
        RunRecord {
            prime: curve.prime(),
            genus: Some(curve.genus),
            h: Some(curve.h_string()),
            poly: curve.homogenize().to_string_with(&vars),
            level: level.and_then(|r| r.level),
            capped: level.is_some_and(|r| r.capped),
            chain: level.map(|r| chain_strings(r, &vars)).unwrap_or_default(),
            rank_c: Some(data.rank_c),
            p_rank: Some(data.p_rank()),
            nilpotency: data.nilpotency,
            class: Some(data.classification.to_string()),
            bound,
            ms: level.map_or(0.0, |r| r.total_ms()),
            version: VERSION.to_string(),
            seed: Some(curve.provenance.clone()),
        }
    }

    pub fn key(&self) -> RecordKey {
        RecordKey {
            prime: self.prime,
            genus: self.genus,
            seed: self.seed.clone().unwrap_or_default(),
        }
    }

    /// `level >= bound` whenever both are known.
    pub fn respects_bound(&self) -> bool {
        match (self.level, self.bound) {
            (Some(l), Some(b)) => l >= b,
            _ => true,
        }
    }
}

impl CsvRow {
    pub fn key(&self) -> RecordKey {
        RecordKey {
            prime: self.prime,
            genus: self.genus,
            seed: self.seed.clone().unwrap_or_default(),
        }
    }
}

fn chain_strings(result: &LevelResult, vars: &[&str]) -> Vec<Vec<String>> {
    result
        .chain
        .iter()
        .map(|j| {
            j.generators()
                .iter()
                .map(|g| g.to_string_with(vars))
                .collect()
        })
        .collect()
}

/// Sweep identity of a record: provenance tag, genus and prime. Ordered by
/// prime, then genus, then tag with embedded numbers compared numerically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RecordKey {
    pub prime: u64,
    pub genus: Option<u32>,
    pub seed: String,
}

impl Ord for RecordKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.prime
            .cmp(&other.prime)
            .then(self.genus.cmp(&other.genus))
            .then_with(|| natural_cmp(&self.seed, &other.seed))
    }
}

impl PartialOrd for RecordKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// String order with digit runs compared as numbers ("i=2" < "i=10").
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, _) => return Ordering::Less,
            (_, None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let na = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let nb = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let da = trim_zeros(&a[..na]);
                let db = trim_zeros(&b[..nb]);
                let ord = da
                    .len()
                    .cmp(&db.len())
                    .then_with(|| da.cmp(db))
                    .then(na.cmp(&nb));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[na..];
                b = &b[nb..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(d: &[u8]) -> &[u8] {
    let k = d.iter().take_while(|&&c| c == b'0').count();
    &d[k..]
}
