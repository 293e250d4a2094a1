//! Resource budgets shared by the polynomial and level routines.

use std::sync::OnceLock;

/// Default cap on the number of terms of any single polynomial.
pub const DEFAULT_MAX_TERMS: u64 = 50_000_000;

/// Default bound on `deg(f) * (p^e - 1)` for the literal (non-recursive)
/// root-ideal computation.
pub const DEFAULT_DIRECT_DEGREE_BOUND: u64 = 30_000;

/// Default bound on `p^e` for operator extraction.
pub const DEFAULT_OPERATOR_MAX_Q: u64 = 125;

/// Default number of chain steps before a level computation gives up.
pub const DEFAULT_MAX_LEVEL: u32 = 8;

/// Environment variable overriding [`DEFAULT_MAX_TERMS`].
pub const MAX_TERMS_ENV: &str = "LEVELSCOPE_MAX_TERMS";

/// Term budget for polynomial products, read once from the environment.
pub fn max_terms() -> u64 {
    static CELL: OnceLock<u64> = OnceLock::new();
    *CELL.get_or_init(|| {
        std::env::var(MAX_TERMS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .filter(|&n| n > 0)
            .unwrap_or(DEFAULT_MAX_TERMS)
    })
}
