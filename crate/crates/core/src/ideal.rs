//! Homogeneous ideals with graded membership decided by linear algebra.
//!
//! For a homogeneous ideal `J` and homogeneous `h` of degree `d`, `h ∈ J`
//! iff `h` lies in the F_p-span of `{m * g}` over generators `g` and
//! monomials `m` with `deg(m * g) = d`. No Gröbner basis is ever formed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{solve_in_span, PrimeField};
use crate::poly::{Monomial, MultiPoly};

/// Echelon basis of a space of homogeneous polynomials of one degree.
///
/// Rows are monic with pairwise distinct leading monomials.
struct Echelon {
    field: PrimeField,
    rows: Vec<MultiPoly>,
    pivots: HashMap<Monomial, usize>,
}

impl Echelon {
    fn new(field: PrimeField) -> Self {
        Echelon {
            field,
            rows: Vec::new(),
            pivots: HashMap::new(),
        }
    }

    /// Full reduction: the result has no monomial that is a pivot.
    fn reduce(&self, v: &MultiPoly) -> MultiPoly {
        let f = self.field;
        let mut work: BTreeMap<Monomial, u64> = v.terms().iter().cloned().collect();
        let mut rest: Vec<(Monomial, u64)> = Vec::new();
        while let Some((m, c)) = work.pop_last() {
            match self.pivots.get(&m) {
                None => rest.push((m, c)),
                Some(&r) => {
                    // leading term cancels; tail terms are strictly smaller
                    for (tm, tc) in &self.rows[r].terms()[1..] {
                        let slot = work.entry(tm.clone()).or_insert(0);
                        *slot = f.sub(*slot, f.mul(c, *tc));
                        if *slot == 0 {
                            work.remove(tm);
                        }
                    }
                }
            }
        }
        MultiPoly::from_terms(f, v.nvars(), rest)
    }

    /// Inserts `v` if it is independent; returns the reduced monic row.
    fn insert(&mut self, v: &MultiPoly) -> Option<MultiPoly> {
        let r = self.reduce(v);
        if r.is_zero() {
            return None;
        }
        let r = r.monic();
        let lead = r.leading().unwrap().0.clone();
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(r.clone());
        Some(r)
    }
}

/// An ideal generated by homogeneous polynomials.
///
/// The zero ideal has no generators; the unit ideal is exactly `(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomIdeal {
    field: PrimeField,
    nvars: usize,
    gens: Vec<MultiPoly>,
}

fn canonical_order(a: &MultiPoly, b: &MultiPoly) -> std::cmp::Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.leading().unwrap().0.cmp(&b.leading().unwrap().0))
        .then_with(|| a.terms().len().cmp(&b.terms().len()))
        .then_with(|| {
            let ka: Vec<_> = a
                .terms()
                .iter()
                .map(|(m, c)| (m.exps().to_vec(), *c))
                .collect();
            let kb: Vec<_> = b
                .terms()
                .iter()
                .map(|(m, c)| (m.exps().to_vec(), *c))
                .collect();
            ka.cmp(&kb)
        })
}

impl HomIdeal {
    /// Ideal generated by `gens` exactly as given, after dropping zeros,
    /// normalizing to monic and deduplicating. Non-homogeneous generators
    /// are rejected.
    pub fn from_generators(field: PrimeField, nvars: usize, gens: Vec<MultiPoly>) -> Result<Self> {
        let mut out: Vec<MultiPoly> = Vec::with_capacity(gens.len());
        for g in gens {
            if g.field() != field || g.nvars() != nvars {
                return Err(Error::Context("generator from a different ring".into()));
            }
            if g.is_zero() {
                continue;
            }
            if !g.is_homogeneous() {
                return Err(Error::Argument(format!("generator {g} is not homogeneous")));
            }
            if g.is_constant() {
                return Ok(Self::unit(field, nvars));
            }
            out.push(g.monic());
        }
        out.sort_by(canonical_order);
        out.dedup();
        Ok(HomIdeal {
            field,
            nvars,
            gens: out,
        })
    }

    /// Ideal generated by `gens`, minimalized.
    pub fn new(field: PrimeField, nvars: usize, gens: Vec<MultiPoly>) -> Result<Self> {
        Ok(Self::from_generators(field, nvars, gens)?.minimalize())
    }

    pub fn unit(field: PrimeField, nvars: usize) -> Self {
        HomIdeal {
            field,
            nvars,
            gens: vec![MultiPoly::one(field, nvars)],
        }
    }

    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        HomIdeal {
            field,
            nvars,
            gens: Vec::new(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_constant()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Echelon basis of the degree-`d` part spanned by `m * g` for the given
    /// generators.
    fn degree_space<'a, I>(&self, gens: I, d: u64) -> Result<Echelon>
    where
        I: IntoIterator<Item = &'a MultiPoly>,
    {
        let mut ech = Echelon::new(self.field);
        for g in gens {
            let dg = g.degree().unwrap();
            if dg > d {
                continue;
            }
            for m in Monomial::all_of_degree(self.nvars, (d - dg) as u32) {
                ech.insert(&g.mul_monomial(&m)?);
            }
        }
        Ok(ech)
    }

    fn check_member(&self, h: &MultiPoly) -> Result<()> {
        if h.field() != self.field || h.nvars() != self.nvars {
            return Err(Error::Context("polynomial from a different ring".into()));
        }
        if !h.is_homogeneous() {
            return Err(Error::Argument(format!(
                "membership needs a homogeneous polynomial, got {h}"
            )));
        }
        Ok(())
    }

    pub fn contains(&self, h: &MultiPoly) -> Result<bool> {
        self.check_member(h)?;
        if h.is_zero() || self.is_unit() {
            return Ok(true);
        }
        let d = h.degree().unwrap();
        let ech = self.degree_space(&self.gens, d)?;
        Ok(ech.reduce(h).is_zero())
    }

    /// True iff every generator of `other` lies in `self`.
    pub fn contains_ideal(&self, other: &HomIdeal) -> Result<bool> {
        if other.field != self.field || other.nvars != self.nvars {
            return Err(Error::Context("ideals from different rings".into()));
        }
        if self.is_unit() || other.is_zero() {
            return Ok(true);
        }
        let mut by_degree: BTreeMap<u64, Vec<&MultiPoly>> = BTreeMap::new();
        for g in &other.gens {
            by_degree.entry(g.degree().unwrap()).or_default().push(g);
        }
        for (d, hs) in by_degree {
            let ech = self.degree_space(&self.gens, d)?;
            if hs.iter().any(|h| !ech.reduce(h).is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality by mutual inclusion.
    pub fn equals(&self, other: &HomIdeal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    /// Canonical irredundant generating set.
    ///
    /// Degrees are processed in increasing order. At degree `d` the span of
    /// all multiples of the already chosen lower-degree generators is formed,
    /// and the degree-`d` generators contribute a reduced echelon basis of
    /// what they add to it. The output depends only on the ideal.
    pub fn minimalize(&self) -> HomIdeal {
        if self.is_unit() || self.is_zero() {
            return self.clone();
        }
        if self.gens.iter().any(MultiPoly::is_constant) {
            return Self::unit(self.field, self.nvars);
        }
        let mut by_degree: BTreeMap<u64, Vec<&MultiPoly>> = BTreeMap::new();
        for g in &self.gens {
            by_degree.entry(g.degree().unwrap()).or_default().push(g);
        }
        let mut kept: Vec<MultiPoly> = Vec::new();
        for (d, cands) in by_degree {
            let mut ech = self
                .degree_space(&kept, d)
                .expect("multiples of homogeneous generators stay in range");
            let lower_rows = ech.rows.len();
            for c in cands {
                ech.insert(c);
            }
            // inter-reduce the new rows so the result is canonical
            let new_rows: Vec<MultiPoly> = ech.rows[lower_rows..].to_vec();
            for (k, row) in new_rows.iter().enumerate() {
                let lead = row.leading().unwrap().clone();
                let idx = lower_rows + k;
                let tail =
                    MultiPoly::from_terms(self.field, self.nvars, row.terms()[1..].iter().cloned());
                let reduced_tail = ech.reduce(&tail);
                let full = MultiPoly::monomial(self.field, lead.0, lead.1)
                    .add(&reduced_tail)
                    .expect("same ring");
                ech.rows[idx] = full;
            }
            kept.extend(ech.rows.drain(lower_rows..));
        }
        kept.sort_by(canonical_order);
        HomIdeal {
            field: self.field,
            nvars: self.nvars,
            gens: kept,
        }
    }

    /// Cofactors `u_j` with `h = sum_j u_j * g_j`, aligned with
    /// [`HomIdeal::generators`], or `None` when `h` is not in the ideal.
    pub fn express(&self, h: &MultiPoly) -> Result<Option<Vec<MultiPoly>>> {
        self.check_member(h)?;
        let zero = MultiPoly::zero(self.field, self.nvars);
        if h.is_zero() {
            return Ok(Some(vec![zero; self.gens.len()]));
        }
        let d = h.degree().unwrap();
        let mut columns: HashMap<Monomial, usize> = HashMap::new();
        let mut products: Vec<(usize, Monomial, MultiPoly)> = Vec::new();
        for (j, g) in self.gens.iter().enumerate() {
            let dg = g.degree().unwrap();
            if dg > d {
                continue;
            }
            for m in Monomial::all_of_degree(self.nvars, (d - dg) as u32) {
                let prod = g.mul_monomial(&m)?;
                for (t, _) in prod.terms() {
                    let n = columns.len();
                    columns.entry(t.clone()).or_insert(n);
                }
                products.push((j, m, prod));
            }
        }
        if h.terms().iter().any(|(t, _)| !columns.contains_key(t)) {
            return Ok(None);
        }
        let dim = columns.len();
        let to_vec = |p: &MultiPoly| {
            let mut v = vec![0u64; dim];
            for (t, c) in p.terms() {
                v[columns[t]] = *c;
            }
            v
        };
        let vectors: Vec<Vec<u64>> = products.iter().map(|(_, _, p)| to_vec(p)).collect();
        let Some(coeffs) = solve_in_span(self.field, &vectors, &to_vec(h))? else {
            return Ok(None);
        };
        let mut cof: Vec<Vec<(Monomial, u64)>> = vec![Vec::new(); self.gens.len()];
        for ((j, m, _), c) in products.into_iter().zip(coeffs) {
            if c != 0 {
                cof[j].push((m, c));
            }
        }
        Ok(Some(
            cof.into_iter()
                .map(|ts| MultiPoly::from_terms(self.field, self.nvars, ts))
                .collect(),
        ))
    }

    /// Ideal generated by the images of the generators under `map`.
    pub fn map_generators<F>(&self, map: F) -> Result<HomIdeal>
    where
        F: Fn(&MultiPoly) -> Result<MultiPoly>,
    {
        let gens = self.gens.iter().map(map).collect::<Result<Vec<_>>>()?;
        Self::new(self.field, self.nvars, gens)
    }

    pub fn to_string_with(&self, vars: &[&str]) -> String {
        if self.is_zero() {
            return "(0)".into();
        }
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string_with(vars)).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for HomIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::poly::default_vars(self.nvars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.to_string_with(&refs))
    }
}

/// The monomial ideal
/// `M = ({z^a x^b : a + b = 2g-2, a >= g-1} ∪ {z^a x^b : a + b = 2g-1, a < g-1})`
/// in `k[x, y, z]`, which is the stable root ideal of an ordinary genus-`g`
/// hyperelliptic quintic-type model.
pub fn relevant_ideal(genus: u32, field: PrimeField) -> Result<HomIdeal> {
    if genus < 2 {
        return Err(Error::Argument(format!(
            "relevant ideal needs genus >= 2, got {genus}"
        )));
    }
    let g = genus;
    let mono = |a: u32, b: u32| MultiPoly::monomial(field, Monomial::new(&[b, 0, a]), 1);
    let mut gens = Vec::new();
    for a in (g - 1)..=(2 * g - 2) {
        gens.push(mono(a, 2 * g - 2 - a));
    }
    for a in 0..(g - 1) {
        gens.push(mono(a, 2 * g - 1 - a));
    }
    HomIdeal::new(field, 3, gens)
}
