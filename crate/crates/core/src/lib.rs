//! Frobenius level of homogeneous polynomials over prime fields, with the
//! Cartier–Manin invariants of hyperelliptic curves.
//!
//! The level of `f` is computed through the ideal chain
//! `J_1 = I_1(f^{p-1})`, `J_{s+1} = I_1(f^{p-1} J_s)`, which avoids the
//! huge powers `f^{p^e - 1}` of the direct definition.

pub mod cartier;
pub mod curves;
pub mod error;
pub mod exec;
pub mod field;
pub mod ideal;
pub mod level;
pub mod limits;
pub mod poly;
pub mod proots;
pub mod upoly;

pub use cartier::{
    cartier_manin, cartier_manin_direct, classify, level_lower_bound, p_rank, power_matrix,
    CartierData, Classification, Width,
};
pub use curves::{family, random_curve, task_seed, CurveModel, Family, ModelKind, Prediction};
pub use error::{Error, Result};
pub use exec::Execution;
pub use field::{solve_in_span, FpElem, FpMatrix, PrimeField};
pub use ideal::{relevant_ideal, HomIdeal};
pub use level::{
    batch_levels, extract_operator, extract_operator_with, hasse_invariant, level_chain,
    level_chain_with, level_direct, level_direct_with, FrobeniusOperator, LevelConfig, LevelResult,
};
pub use poly::{default_vars, Monomial, MultiPoly};
pub use proots::{
    decompose, roots_ideal, roots_one_of_ideal, roots_one_of_ideal_with, RootDecomposition,
};
pub use upoly::UniPoly;
