//! Decomposition over the monomial basis of `R` as an `R^{p^e}`-module and
//! ideals of p^e-th roots.
//!
//! Every polynomial `g` can be written uniquely as
//! `g = sum_a g_a^{p^e} x^a` with each coordinate of `a` below `p^e`. The
//! ideal of p^e-th roots of `g` is generated by the `g_a`. Because the
//! coefficients live in F_p, where `c^{p^e} = c`, no coefficient roots are
//! needed: a term `c x^b` simply contributes `c x^(b div p^e)` to component
//! `b mod p^e`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ideal::HomIdeal;
use crate::poly::{Monomial, MultiPoly};

/// The components `g_a` of a polynomial over the basis `{x^a : a_i < p^e}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDecomposition {
    pub e: u32,
    /// `p^e`
    pub q: u64,
    pub components: BTreeMap<Monomial, MultiPoly>,
}

impl RootDecomposition {
    /// `sum_a g_a^{p^e} x^a`.
    pub fn reconstruct(&self, template: &MultiPoly) -> Result<MultiPoly> {
        let mut acc = MultiPoly::zero(template.field(), template.nvars());
        for (alpha, g) in &self.components {
            acc = acc.add(&g.inflate(self.q)?.mul_monomial(alpha)?)?;
        }
        Ok(acc)
    }
}

fn root_modulus(g: &MultiPoly, e: u32) -> Result<u64> {
    if e == 0 {
        return Err(Error::Argument("root level e must be at least 1".into()));
    }
    let q = g
        .field()
        .modulus()
        .checked_pow(e)
        .filter(|&q| q <= u32::MAX as u64)
        .ok_or(Error::ExponentOverflow)?;
    Ok(q)
}

/// Splits `g` into its p^e-th root components in a single pass over terms.
pub fn decompose(g: &MultiPoly, e: u32) -> Result<RootDecomposition> {
    let q = root_modulus(g, e)?;
    let qq = q as u32;
    let mut buckets: BTreeMap<Monomial, Vec<(Monomial, u64)>> = BTreeMap::new();
    for (m, c) in g.terms() {
        let (quot, rem): (Vec<u32>, Vec<u32>) = m.exps().iter().map(|&b| (b / qq, b % qq)).unzip();
        buckets
            .entry(Monomial::new(&rem))
            .or_default()
            .push((Monomial::new(&quot), *c));
    }
    let components = buckets
        .into_iter()
        .map(|(alpha, terms)| (alpha, MultiPoly::from_terms(g.field(), g.nvars(), terms)))
        .collect();
    let dec = RootDecomposition { e, q, components };
    debug_assert_eq!(
        dec.reconstruct(g).as_ref(),
        Ok(g),
        "root decomposition must reconstruct"
    );
    Ok(dec)
}

/// Ideal of p^e-th roots of a homogeneous polynomial, minimalized.
pub fn roots_ideal(g: &MultiPoly, e: u32) -> Result<HomIdeal> {
    if !g.is_homogeneous() {
        return Err(Error::Argument(
            "root ideals are only supported for homogeneous polynomials".into(),
        ));
    }
    let dec = decompose(g, e)?;
    HomIdeal::new(g.field(), g.nvars(), dec.components.into_values().collect())
}

/// Smallest `L` with `K ⊆ L^{[p]}`: the sum of the root ideals of the
/// generators of `K`.
pub fn roots_one_of_ideal(k: &HomIdeal) -> Result<HomIdeal> {
    roots_one_of_ideal_with(k, Execution::default())
}

pub fn roots_one_of_ideal_with(k: &HomIdeal, exec: Execution) -> Result<HomIdeal> {
    roots_one_of_products(k.field(), k.nvars(), None, k.generators(), exec)
}

/// `I_1` of the ideal generated by `{factor * g : g in gens}` (or the bare
/// generators when `factor` is `None`). The products and decompositions run
/// per generator through `exec`.
pub(crate) fn roots_one_of_products(
    field: crate::field::PrimeField,
    nvars: usize,
    factor: Option<&MultiPoly>,
    gens: &[MultiPoly],
    exec: Execution,
) -> Result<HomIdeal> {
    let parts = exec.map(gens, |g| -> Result<Vec<MultiPoly>> {
        let h = match factor {
            Some(f) => f.mul_with(g, Execution::Sequential)?,
            None => g.clone(),
        };
        Ok(decompose(&h, 1)?.components.into_values().collect())
    });
    let mut all = Vec::new();
    for part in parts {
        all.extend(part?);
    }
    HomIdeal::new(field, nvars, all)
}
