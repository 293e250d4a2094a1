//! The level of a polynomial: the step at which the chain
//! `R = I_0(f^0) ⊇ I_1(f^{p-1}) ⊇ I_2(f^{p^2-1}) ⊇ ...` stops descending.
//!
//! Steps are computed by the recursion `J_{s+1} = I_1(F * J_s)` with
//! `F = f^{p-1}`, which follows from `I_{e+1} = I_1 ∘ I_e` and
//! `I_e(h^{p^e} u) = h * I_e(u)`. [`level_direct`] evaluates the definition
//! literally and serves as the oracle for the recursion.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::FpElem;
use crate::ideal::HomIdeal;
use crate::limits;
use crate::poly::MultiPoly;
use crate::proots::{self, decompose};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelConfig {
    /// Number of chain steps computed before giving up.
    pub max_e: u32,
    pub execution: Execution,
}

impl Default for LevelConfig {
    fn default() -> Self {
        LevelConfig {
            max_e: limits::DEFAULT_MAX_LEVEL,
            execution: Execution::default(),
        }
    }
}

/// Outcome of a chain computation.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelResult {
    pub f: MultiPoly,
    /// `[J_1, J_2, ...]`; for level `e >= 2` the last two entries are equal
    /// and the chain ends there.
    pub chain: Vec<HomIdeal>,
    pub level: Option<u32>,
    /// True iff `max_e` steps were computed without stabilization.
    pub capped: bool,
    /// Wall time of each step in milliseconds.
    pub step_ms: Vec<f64>,
}

impl LevelResult {
    /// `J_s` for `s >= 1`.
    pub fn step(&self, s: usize) -> Option<&HomIdeal> {
        s.checked_sub(1).and_then(|i| self.chain.get(i))
    }

    /// The chain with consecutive repeats collapsed, starting from `R`.
    pub fn distinct_chain(&self) -> Vec<HomIdeal> {
        let mut out = vec![HomIdeal::unit(self.f.field(), self.f.nvars())];
        for j in &self.chain {
            if out.last() != Some(j) {
                out.push(j.clone());
            }
        }
        out
    }

    pub fn total_ms(&self) -> f64 {
        self.step_ms.iter().sum()
    }
}

fn check_input(f: &MultiPoly) -> Result<()> {
    if f.is_zero() {
        return Err(Error::Argument(
            "the level of the zero polynomial is undefined".into(),
        ));
    }
    if !f.is_homogeneous() {
        return Err(Error::Argument(format!("{f} is not homogeneous")));
    }
    Ok(())
}

pub fn level_chain(f: &MultiPoly, max_e: u32) -> Result<LevelResult> {
    level_chain_with(
        f,
        &LevelConfig {
            max_e,
            ..LevelConfig::default()
        },
    )
}

/// Computes the chain until two consecutive ideals agree or `max_e` steps
/// have been taken.
///
/// Resource exhaustion inside a step ends the computation with a capped
/// result rather than an error.
pub fn level_chain_with(f: &MultiPoly, cfg: &LevelConfig) -> Result<LevelResult> {
    check_input(f)?;
    if cfg.max_e == 0 {
        return Err(Error::Argument("max_e must be at least 1".into()));
    }
    let p = f.field().modulus();
    let mut result = LevelResult {
        f: f.clone(),
        chain: Vec::new(),
        level: None,
        capped: false,
        step_ms: Vec::new(),
    };
    let t0 = Instant::now();
    let big_f = match f.pow_with(p - 1, cfg.execution) {
        Ok(v) => v,
        Err(Error::Resource { .. }) => {
            result.capped = true;
            return Ok(result);
        }
        Err(e) => return Err(e),
    };
    let first = match proots::roots_ideal(&big_f, 1) {
        Ok(j) => j,
        Err(Error::Resource { .. }) => {
            result.capped = true;
            return Ok(result);
        }
        Err(e) => return Err(e),
    };
    result.step_ms.push(t0.elapsed().as_secs_f64() * 1e3);
    let unit = first.is_unit();
    result.chain.push(first);
    if unit {
        result.level = Some(1);
        return Ok(result);
    }
    for s in 1..cfg.max_e {
        let t = Instant::now();
        let prev = &result.chain[s as usize - 1];
        let next = match proots::roots_one_of_products(
            f.field(),
            f.nvars(),
            Some(&big_f),
            prev.generators(),
            cfg.execution,
        ) {
            Ok(j) => j,
            Err(Error::Resource { .. }) => {
                result.capped = true;
                return Ok(result);
            }
            Err(e) => return Err(e),
        };
        let stable = next.equals(prev)?;
        result.step_ms.push(t.elapsed().as_secs_f64() * 1e3);
        result.chain.push(next);
        if stable {
            result.level = Some(s + 1);
            return Ok(result);
        }
    }
    result.capped = true;
    Ok(result)
}

/// Level computations for many polynomials, fanned out through `cfg.execution`.
/// Each chain itself runs sequentially.
pub fn batch_levels(polys: &[MultiPoly], cfg: &LevelConfig) -> Vec<Result<LevelResult>> {
    let inner = LevelConfig {
        execution: Execution::Sequential,
        ..*cfg
    };
    cfg.execution.map(polys, |f| level_chain_with(f, &inner))
}

/// `I_e(f^{p^e - 1})` straight from the definition, with no recursion.
pub fn level_direct(f: &MultiPoly, e: u32) -> Result<HomIdeal> {
    level_direct_with(f, e, limits::DEFAULT_DIRECT_DEGREE_BOUND)
}

pub fn level_direct_with(f: &MultiPoly, e: u32, degree_bound: u64) -> Result<HomIdeal> {
    check_input(f)?;
    if e == 0 {
        return Err(Error::Argument("e must be at least 1".into()));
    }
    let p = f.field().modulus();
    let q = p.checked_pow(e).ok_or(Error::ExponentOverflow)?;
    let needed = f.degree().unwrap().saturating_mul(q - 1);
    if needed > degree_bound {
        return Err(Error::Resource {
            budget: "direct degree bound",
            needed,
            limit: degree_bound,
        });
    }
    proots::roots_ideal(&f.pow(q - 1)?, e)
}

/// A certificate for the Frobenius-descent operator of level `e`:
/// `f^{p^e - p} = sum_j u_j * g_j^{p^e}` with `g_j` generators of
/// `I_e(f^{p^e - 1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusOperator {
    pub e: u32,
    /// `(u_j, g_j)`
    pub pairs: Vec<(MultiPoly, MultiPoly)>,
}

impl FrobeniusOperator {
    pub fn q(&self) -> Option<u64> {
        self.pairs
            .first()
            .map(|(u, _)| u.field().modulus().pow(self.e))
    }

    /// `sum_j u_j * g_j^{p^e}`.
    pub fn apply(&self, field: crate::field::PrimeField, nvars: usize) -> Result<MultiPoly> {
        let q = field.modulus().pow(self.e);
        let mut acc = MultiPoly::zero(field, nvars);
        for (u, g) in &self.pairs {
            acc = acc.add(&u.mul(&g.inflate(q)?)?)?;
        }
        Ok(acc)
    }

    /// Checks the defining identity against `f`.
    pub fn verify(&self, f: &MultiPoly) -> Result<bool> {
        let p = f.field().modulus();
        let q = p.pow(self.e);
        Ok(self.apply(f.field(), f.nvars())? == f.pow(q - p)?)
    }
}

pub fn extract_operator(f: &MultiPoly, result: &LevelResult) -> Result<FrobeniusOperator> {
    extract_operator_with(f, result, limits::DEFAULT_OPERATOR_MAX_Q)
}

/// Solves `f^{q-p} = sum_j u_j g_j^q` for the cofactors `u_j`, `q = p^e`.
///
/// The target is split into its `q`-th root components `h_a`; each is
/// written as `h_a = sum_j v_{a,j} g_j` by graded linear algebra, and then
/// `u_j = sum_a v_{a,j}^q x^a`.
pub fn extract_operator_with(
    f: &MultiPoly,
    result: &LevelResult,
    max_q: u64,
) -> Result<FrobeniusOperator> {
    let e = result
        .level
        .ok_or_else(|| Error::Argument("level result has no level".into()))?;
    let p = f.field().modulus();
    let q = p.checked_pow(e).ok_or(Error::ExponentOverflow)?;
    if q > max_q {
        return Err(Error::Resource {
            budget: "operator p^e bound",
            needed: q,
            limit: max_q,
        });
    }
    let ideal = result
        .step(e as usize)
        .ok_or_else(|| Error::Internal("chain shorter than its level".into()))?;
    let target = f.pow(q - p)?;
    let dec = decompose(&target, e)?;
    let gens = ideal.generators();
    let mut cofactors: Vec<MultiPoly> = vec![MultiPoly::zero(f.field(), f.nvars()); gens.len()];
    for (alpha, h) in &dec.components {
        let vs = ideal.express(h)?.ok_or_else(|| {
            Error::Internal(format!(
                "component {h} of f^(p^e-p) is not in I_e; the level computation is inconsistent"
            ))
        })?;
        for (u, v) in cofactors.iter_mut().zip(vs) {
            if !v.is_zero() {
                *u = u.add(&v.inflate(q)?.mul_monomial(alpha)?)?;
            }
        }
    }
    let op = FrobeniusOperator {
        e,
        pairs: cofactors.into_iter().zip(gens.iter().cloned()).collect(),
    };
    if op.apply(f.field(), f.nvars())? != target {
        return Err(Error::Internal(
            "operator certificate does not recombine".into(),
        ));
    }
    Ok(op)
}

/// Coefficient of `(xyz)^{p-1}` in `f^{p-1}` for a plane cubic.
pub fn hasse_invariant(f: &MultiPoly) -> Result<FpElem> {
    if f.nvars() != 3 || !f.is_homogeneous() || f.degree() != Some(3) {
        return Err(Error::Argument(
            "the Hasse invariant needs a homogeneous cubic in three variables".into(),
        ));
    }
    let p = f.field().modulus();
    let e = (p - 1) as u32;
    Ok(f.pow(p - 1)?.coeff_elem(&[e, e, e]))
}
