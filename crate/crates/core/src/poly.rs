//! Sparse multivariate polynomials over F_p.
//!
//! Terms are kept in a canonical descending graded-reverse-lexicographic
//! order with no zero coefficients, so structural equality is polynomial
//! equality and iteration order is deterministic.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::{FpElem, FpMatrix, PrimeField};
use crate::limits;

/// Exponent vector. Ordered by graded reverse lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn new(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut out = self.0.clone();
        for (a, &b) in out.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(b).ok_or(Error::ExponentOverflow)?;
        }
        Ok(Monomial(out))
    }

    pub fn scale(&self, k: u64) -> Result<Monomial> {
        let k = u32::try_from(k).map_err(|_| Error::ExponentOverflow)?;
        let mut out = self.0.clone();
        for a in out.iter_mut() {
            *a = a.checked_mul(k).ok_or(Error::ExponentOverflow)?;
        }
        Ok(Monomial(out))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// All monomials of total degree `d` in `nvars` variables, ascending.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(prefix: &mut Vec<u32>, left: usize, d: u32, out: &mut Vec<Monomial>) {
            if left == 1 {
                prefix.push(d);
                out.push(Monomial::new(prefix));
                prefix.pop();
                return;
            }
            for e in 0..=d {
                prefix.push(e);
                rec(prefix, left - 1, d - e, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            return out;
        }
        rec(&mut Vec::with_capacity(nvars), nvars, d, &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(other.0.iter()).rev() {
                if a != b {
                    // smaller exponent in the last differing variable wins
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial in `nvars` variables over a prime field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    field: PrimeField,
    nvars: usize,
    /// Descending grevlex, nonzero coefficients.
    terms: Vec<(Monomial, u64)>,
}

fn check_budget(count: usize) -> Result<()> {
    let limit = limits::max_terms();
    if count as u64 > limit {
        return Err(Error::Resource {
            budget: limits::MAX_TERMS_ENV,
            needed: count as u64,
            limit,
        });
    }
    Ok(())
}

impl MultiPoly {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        MultiPoly {
            field,
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: u64) -> Self {
        Self::from_terms(field, nvars, [(Monomial::one(nvars), c)])
    }

    pub fn one(field: PrimeField, nvars: usize) -> Self {
        Self::constant(field, nvars, 1)
    }

    /// The variable `x_i`.
    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, Monomial::new(&e), 1)
    }

    pub fn monomial(field: PrimeField, m: Monomial, c: u64) -> Self {
        let nvars = m.nvars();
        Self::from_terms(field, nvars, [(m, c)])
    }

    /// Collects terms, merging duplicates and dropping zeros.
    pub fn from_terms<I>(field: PrimeField, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, u64)>,
    {
        let mut acc: HashMap<Monomial, u64> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            let c = field.reduce(c);
            let slot = acc.entry(m).or_insert(0);
            *slot = field.add(*slot, c);
        }
        Self::from_map(field, nvars, acc)
    }

    fn from_map(field: PrimeField, nvars: usize, acc: HashMap<Monomial, u64>) -> Self {
        let mut terms: Vec<(Monomial, u64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly {
            field,
            nvars,
            terms,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in descending grevlex order.
    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => {
                let d = m0.degree();
                self.terms.iter().all(|(m, _)| m.degree() == d)
            }
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, u64)> {
        self.terms.first()
    }

    pub fn coeff(&self, exps: &[u32]) -> u64 {
        let m = Monomial::new(exps);
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn coeff_elem(&self, exps: &[u32]) -> FpElem {
        self.field.elem(self.coeff(exps))
    }

    fn check_same(&self, other: &MultiPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Context(format!(
                "moduli {} and {}",
                self.field.modulus(),
                other.field.modulus()
            )));
        }
        if self.nvars != other.nvars {
            return Err(Error::Context(format!(
                "{} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_same(other)?;
        let f = self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), *ca));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), *cb));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(*ca, *cb);
                    if c != 0 {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(MultiPoly {
            field: f,
            nvars: self.nvars,
            terms: out,
        })
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(self.field.neg(1))
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> MultiPoly {
        let c = self.field.reduce(c);
        if c == 0 {
            return Self::zero(self.field, self.nvars);
        }
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(*a, c)))
                .collect(),
        }
    }

    /// Scales so that the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> MultiPoly {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(*c).expect("nonzero leading coefficient")),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Result<MultiPoly> {
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| Ok((t.mul(m)?, *c)))
            .collect::<Result<Vec<_>>>()?;
        // multiplying by a monomial preserves grevlex order
        Ok(MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms,
        })
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.mul_with(other, Execution::default())
    }

    /// Exact product, split across threads for large operands.
    pub fn mul_with(&self, other: &MultiPoly, exec: Execution) -> Result<MultiPoly> {
        self.check_same(other)?;
        let (a, b) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        if b.terms.is_empty() {
            return Ok(Self::zero(self.field, self.nvars));
        }
        if b.terms.len() == 1 {
            let (m, c) = &b.terms[0];
            return Ok(a.mul_monomial(m)?.scale(*c));
        }
        const PAR_THRESHOLD: usize = 1 << 16;
        let chunks = exec.fanout();
        if chunks > 1 && a.terms.len() * b.terms.len() >= PAR_THRESHOLD {
            let size = a.terms.len().div_ceil(chunks);
            let parts: Vec<&[(Monomial, u64)]> = a.terms.chunks(size).collect();
            let partials = exec.map(&parts, |chunk| accumulate(self.field, chunk, &b.terms));
            let mut merged: HashMap<Monomial, u64> = HashMap::new();
            for part in partials {
                for (m, c) in part? {
                    let slot = merged.entry(m).or_insert(0);
                    *slot = self.field.add(*slot, c);
                }
                check_budget(merged.len())?;
            }
            Ok(Self::from_map(self.field, self.nvars, merged))
        } else {
            let acc = accumulate(self.field, &a.terms, &b.terms)?;
            Ok(Self::from_map(self.field, self.nvars, acc))
        }
    }

    /// `f^n` by repeated squaring, used for exponents below p.
    fn pow_small(&self, mut n: u64, exec: Execution) -> Result<MultiPoly> {
        let mut acc = Self::one(self.field, self.nvars);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_with(&base, exec)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_with(&base, exec)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, n: u64) -> Result<MultiPoly> {
        self.pow_with(n, Execution::default())
    }

    /// `f^n` via the base-p digits of `n`: `f^n = prod_i (f^{n_i})^{p^i}`.
    pub fn pow_with(&self, n: u64, exec: Execution) -> Result<MultiPoly> {
        let p = self.field.modulus();
        let mut acc = Self::one(self.field, self.nvars);
        let mut rest = n;
        let mut i = 0u32;
        while rest > 0 {
            let digit = rest % p;
            if digit > 0 {
                let block = self.pow_small(digit, exec)?;
                let block = if i > 0 {
                    block.frobenius_power(i)?
                } else {
                    block
                };
                acc = acc.mul_with(&block, exec)?;
            }
            rest /= p;
            i += 1;
        }
        Ok(acc)
    }

    /// `f^{p^k}`: exponents scale by `p^k`, coefficients are fixed since
    /// they lie in the prime field.
    pub fn frobenius_power(&self, k: u32) -> Result<MultiPoly> {
        let q = self
            .field
            .modulus()
            .checked_pow(k)
            .ok_or(Error::ExponentOverflow)?;
        self.inflate(q)
    }

    /// Substitutes `x_i -> x_i^q` for every variable.
    pub fn inflate(&self, q: u64) -> Result<MultiPoly> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.scale(q)?, *c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms,
        })
    }

    /// Right action `(f|A)(x) = f(A x)`: variable `i` becomes the linear
    /// form given by row `i` of `A`.
    pub fn linear_change(&self, a: &FpMatrix) -> Result<MultiPoly> {
        if a.rows() != self.nvars || a.cols() != self.nvars {
            return Err(Error::Shape(format!(
                "{}x{} matrix for {} variables",
                a.rows(),
                a.cols(),
                self.nvars
            )));
        }
        if a.field() != self.field {
            return Err(Error::Context("matrix over a different field".into()));
        }
        a.inverse()?;
        let forms: Vec<MultiPoly> = (0..self.nvars)
            .map(|i| {
                Self::from_terms(
                    self.field,
                    self.nvars,
                    (0..self.nvars).map(|j| {
                        let mut e = vec![0; self.nvars];
                        e[j] = 1;
                        (Monomial::new(&e), a.get(i, j))
                    }),
                )
            })
            .collect();
        // powers[i][k] = form_i^k, extended on demand
        let mut powers: Vec<Vec<MultiPoly>> = forms
            .iter()
            .map(|_| vec![Self::one(self.field, self.nvars)])
            .collect();
        let mut out = Self::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let mut term = Self::constant(self.field, self.nvars, *c);
            for (i, &e) in m.exps().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&forms[i])?;
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Evaluates at a point of F_p^nvars.
    pub fn eval(&self, point: &[u64]) -> u64 {
        let f = self.field;
        self.terms.iter().fold(0, |acc, (m, c)| {
            let v = m
                .exps()
                .iter()
                .zip(point)
                .fold(*c, |v, (&e, &x)| f.mul(v, f.pow(x, e as u64)));
            f.add(acc, v)
        })
    }

    pub fn parse(text: &str, field: PrimeField, vars: &[&str]) -> Result<MultiPoly> {
        Parser::new(text, field, vars).parse()
    }

    /// Canonical text using the given variable names.
    pub fn to_string_with(&self, vars: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let sc = self.field.signed(*c);
            let mag = sc.unsigned_abs();
            if k == 0 {
                if sc < 0 {
                    s.push('-');
                }
            } else if sc < 0 {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if mag != 1 || m.is_one() {
                factors.push(mag.to_string());
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(vars[i].to_string()),
                    _ => factors.push(format!("{}^{}", vars[i], e)),
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

fn accumulate(
    field: PrimeField,
    a: &[(Monomial, u64)],
    b: &[(Monomial, u64)],
) -> Result<HashMap<Monomial, u64>> {
    let mut acc: HashMap<Monomial, u64> = HashMap::with_capacity(a.len().max(b.len()) * 2);
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = ma.mul(mb)?;
            let slot = acc.entry(m).or_insert(0);
            *slot = field.add(*slot, field.mul(*ca, *cb));
        }
        check_budget(acc.len())?;
    }
    Ok(acc)
}

/// Default variable names: `x, y, z` for up to three variables, else `x1..xn`.
pub fn default_vars(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars]
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_vars(self.nvars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.to_string_with(&refs))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: PrimeField,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, field: PrimeField, vars: &'a [&'a str]) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            field,
            vars,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<MultiPoly> {
        let n = self.vars.len();
        if n == 0 {
            return self.err("no variables declared");
        }
        if self.peek().is_none() {
            return self.err("empty input");
        }
        let mut terms = Vec::new();
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        loop {
            let (m, c) = self.term()?;
            let c = if negate { self.field.neg(c) } else { c };
            terms.push((m, c));
            match self.peek() {
                None => break,
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(ch) => return self.err(format!("unexpected character '{}'", ch as char)),
            }
            self.pos += 1;
        }
        Ok(MultiPoly::from_terms(self.field, n, terms))
    }

    fn term(&mut self) -> Result<(Monomial, u64)> {
        let mut exps = vec![0u32; self.vars.len()];
        let mut coeff = 1u64;
        match self.peek() {
            Some(ch) if ch.is_ascii_digit() => {
                coeff = self.uint_mod()?;
                if self.peek() != Some(b'*') {
                    return Ok((Monomial::new(&exps), coeff));
                }
                self.pos += 1;
                self.factor(&mut exps)?;
            }
            Some(_) => self.factor(&mut exps)?,
            None => return self.err("expected a term"),
        }
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.factor(&mut exps)?;
        }
        Ok((Monomial::new(&exps), coeff))
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<()> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            if self.pos == start && self.src[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a variable");
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let Some(idx) = self.vars.iter().position(|v| *v == name) else {
            self.pos = start;
            return self.err(format!("unknown variable '{name}'"));
        };
        let mut e = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                return self.err("malformed exponent");
            }
            let start = self.pos;
            while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            e = match digits.parse() {
                Ok(v) => v,
                Err(_) => {
                    self.pos = start;
                    return self.err("exponent too large");
                }
            };
        }
        exps[idx] = exps[idx].checked_add(e).ok_or(Error::ExponentOverflow)?;
        Ok(())
    }

    fn uint_mod(&mut self) -> Result<u64> {
        let p = self.field.modulus();
        let mut v = 0u64;
        while let Some(&ch) = self.src.get(self.pos) {
            if !ch.is_ascii_digit() {
                break;
            }
            v = (v * 10 + (ch - b'0') as u64) % p;
            self.pos += 1;
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const XYZ: [&str; 3] = ["x", "y", "z"];

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(s: &str, p: u64) -> MultiPoly {
        MultiPoly::parse(s, fp(p), &XYZ).unwrap()
    }

    #[test]
    fn grevlex_order() {
        let mut ms = Monomial::all_of_degree(3, 2);
        ms.sort_by(|a, b| b.cmp(a));
        let names: Vec<String> = ms
            .iter()
            .map(|m| MultiPoly::monomial(fp(5), m.clone(), 1).to_string())
            .collect();
        assert_eq!(names, ["x^2", "x*y", "y^2", "x*z", "y*z", "z^2"]);
    }

    #[test]
    fn parse_examples() {
        let f = poly("y^2*z^3 - x^5 - 2*z^5", 11);
        assert_eq!(f.num_terms(), 3);
        assert_eq!(f.coeff(&[0, 0, 5]), 9);
        assert!(poly("x - x", 7).is_zero());
        assert!(matches!(
            MultiPoly::parse("x^(3)", fp(7), &XYZ),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            MultiPoly::parse("x + w", fp(7), &XYZ),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(matches!(
            MultiPoly::parse("  ", fp(7), &XYZ),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            MultiPoly::parse("x^", fp(7), &XYZ),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            MultiPoly::parse("x +", fp(7), &XYZ),
            Err(Error::Parse { .. })
        ));
        assert_eq!(poly("-3", 7).coeff(&[0, 0, 0]), 4);
        assert_eq!(poly("x*x*y", 7), poly("x^2*y", 7));
        assert_eq!(poly("100*x", 7).coeff(&[1, 0, 0]), 2);
    }

    #[test]
    fn canonical_printing() {
        let f = poly("-2*z^5 + y^2*z^3 - x^5", 11);
        assert_eq!(f.to_string(), "-x^5 + y^2*z^3 - 2*z^5");
        assert_eq!(poly("0", 5).to_string(), "0");
        assert_eq!(poly("1", 5).to_string(), "1");
    }

    #[test]
    fn mul_examples() {
        assert_eq!(
            poly("x+y", 7).mul(&poly("x-y", 7)).unwrap(),
            poly("x^2 + 6*y^2", 7)
        );
        let f = poly("x^3 + 2*y*z - 1", 7);
        assert_eq!(f.mul(&MultiPoly::one(fp(7), 3)).unwrap(), f);
        let g = MultiPoly::parse("x", fp(5), &["x", "y"]).unwrap();
        assert!(matches!(f.mul(&g), Err(Error::Context(_))));
        let h = poly("x", 5);
        assert!(matches!(f.mul(&h), Err(Error::Context(_))));
        assert_eq!(PrimeField::new(2), Err(Error::NotOddPrime(2)));
    }

    #[test]
    fn pow_examples() {
        assert_eq!(poly("x+y", 3).pow(3).unwrap(), poly("x^3 + y^3", 3));
        assert_eq!(poly("x+y+z", 3).pow(0).unwrap(), poly("1", 3));
        assert_eq!(poly("0", 3).pow(0).unwrap(), poly("1", 3));
        assert!(poly("0", 3).pow(4).unwrap().is_zero());
        let f = poly("y^2*z^3 - x^5 - 2*z^5", 11).pow(10).unwrap();
        assert_eq!(f.degree(), Some(50));
        assert!(f.is_homogeneous());
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(
            poly("x + 2*y", 5).frobenius_power(1).unwrap(),
            poly("x^5 + 2*y^5", 5)
        );
        assert_eq!(poly("1", 5).frobenius_power(3).unwrap(), poly("1", 5));
        let f = poly("x+y", 3);
        let naive = (0..8).fold(f.clone(), |acc, _| acc.mul(&f).unwrap());
        assert_eq!(f.frobenius_power(2).unwrap(), naive);
        assert_eq!(naive, poly("x^9 + y^9", 3));
        assert_eq!(
            poly("x", 3).frobenius_power(40),
            Err(Error::ExponentOverflow)
        );
    }

    #[test]
    fn linear_change_examples() {
        let f = fp(13);
        let swap = FpMatrix::from_rows(f, &[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(
            poly("x^2", 13).linear_change(&swap).unwrap(),
            poly("y^2", 13)
        );
        let g = poly("x^3 - 2*y*z^2 + x*y*z", 13);
        assert_eq!(g.linear_change(&FpMatrix::identity(f, 3)).unwrap(), g);
        let sing = FpMatrix::from_rows(f, &[vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(matches!(
            g.linear_change(&sing),
            Err(Error::InvalidTransform(_))
        ));
    }

    #[test]
    fn budget_guard_reports_name() {
        let err = check_budget(usize::MAX).unwrap_err();
        assert!(err.to_string().contains(limits::MAX_TERMS_ENV));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    const XYZ: [&str; 3] = ["x", "y", "z"];

    fn arb_poly(p: u64, max_deg: u32) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((0..=max_deg, 0..=max_deg, 0..=max_deg, 0..p), 0..6).prop_map(
            move |ts| {
                let f = PrimeField::new(p).unwrap();
                MultiPoly::from_terms(
                    f,
                    3,
                    ts.into_iter()
                        .map(|(a, b, c, k)| (Monomial::new(&[a, b, c]), k)),
                )
            },
        )
    }

    fn arb_homogeneous(p: u64, d: u32) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((0..=d, 0..=d, 1..p), 1..6).prop_map(move |ts| {
            let f = PrimeField::new(p).unwrap();
            MultiPoly::from_terms(
                f,
                3,
                ts.into_iter().map(|(a, b, k)| {
                    let a = a.min(d);
                    let b = b.min(d - a);
                    (Monomial::new(&[a, b, d - a - b]), k)
                }),
            )
        })
    }

    fn naive_pow(f: &MultiPoly, n: u64) -> MultiPoly {
        let mut acc = MultiPoly::one(f.field(), f.nvars());
        for _ in 0..n {
            acc = acc.mul(f).unwrap();
        }
        acc
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn pow_is_additive(f in arb_poly(5, 2), m in 0u64..7, n in 0u64..7) {
            let lhs = f.pow(m + n).unwrap();
            let rhs = f.pow(m).unwrap().mul(&f.pow(n).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pow_matches_repeated_multiplication(f in arb_poly(3, 2), n in 0u64..12) {
            prop_assert_eq!(f.pow(n).unwrap(), naive_pow(&f, n));
        }

        #[test]
        fn frobenius_matches_pow(p in prop::sample::select(vec![3u64, 5]), k in 1u32..=2, seed in arb_poly(3, 1)) {
            let f = MultiPoly::from_terms(PrimeField::new(p).unwrap(), 3, seed.terms().iter().cloned());
            let q = p.pow(k);
            prop_assert_eq!(f.frobenius_power(k).unwrap(), naive_pow(&f, q));
        }

        #[test]
        fn print_parse_roundtrip(f in arb_poly(11, 4)) {
            let text = f.to_string();
            prop_assert_eq!(MultiPoly::parse(&text, f.field(), &XYZ).unwrap(), f);
        }

        #[test]
        fn linear_change_composes(f in arb_homogeneous(13, 3), raw in prop::collection::vec(0i64..13, 9)) {
            let field = PrimeField::new(13).unwrap();
            let a = FpMatrix::from_rows(field, &[raw[0..3].to_vec(), raw[3..6].to_vec(), raw[6..9].to_vec()]).unwrap();
            prop_assume!(a.inverse().is_ok());
            let g = f.linear_change(&a).unwrap();
            prop_assert!(g.is_homogeneous());
            prop_assert_eq!(g.degree(), f.degree());
            let back = g.linear_change(&a.inverse().unwrap()).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn parallel_mul_agrees(f in arb_poly(7, 6), g in arb_poly(7, 6)) {
            let a = f.pow(6).unwrap();
            let b = g.pow(5).unwrap();
            prop_assert_eq!(
                a.mul_with(&b, Execution::Sequential).unwrap(),
                a.mul_with(&b, Execution::Parallel).unwrap()
            );
        }
    }
}
