//! Arithmetic in F_p for word-sized odd primes and dense linear algebra over it.
//!
//! Residues are stored canonically in `[0, p)`. The modulus is capped at
//! `2^31 - 1` so that a product of two residues fits in a `u64` before
//! reduction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`PrimeField::new`].
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// A validated odd prime field context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    /// Rejects 2, composites and anything above [`MAX_PRIME`].
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || p > MAX_PRIME || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(self, v: u64) -> u64 {
        v % self.p
    }

    /// Reduce a signed integer into `[0, p)`.
    pub fn from_i64(self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> Result<u64> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::DivisionByZero(self.p));
        }
        // extended Euclid on signed values
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(self.from_i64(t0))
    }

    pub fn elem(self, v: u64) -> FpElem {
        FpElem {
            value: v % self.p,
            field: self,
        }
    }

    pub fn zero(self) -> FpElem {
        self.elem(0)
    }

    pub fn one(self) -> FpElem {
        self.elem(1)
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for printing.
    pub fn signed(self, v: u64) -> i64 {
        if v > self.p / 2 {
            v as i64 - self.p as i64
        } else {
            v as i64
        }
    }
}

/// An element of F_p carrying its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u64,
    field: PrimeField,
}

impl FpElem {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Result<FpElem> {
        Ok(FpElem {
            value: self.field.inv(self.value)?,
            field: self.field,
        })
    }

    pub fn pow(self, exp: u64) -> FpElem {
        FpElem {
            value: self.field.pow(self.value, exp),
            field: self.field,
        }
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for FpElem {
            type Output = FpElem;
            fn $m(self, rhs: FpElem) -> FpElem {
                debug_assert_eq!(self.field, rhs.field, "mixed moduli");
                FpElem {
                    value: self.field.$m(self.value, rhs.value),
                    field: self.field,
                }
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for FpElem {
    type Output = FpElem;
    fn neg(self) -> FpElem {
        FpElem {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

/// Dense row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.modulus();
        }
        m
    }

    /// Builds a matrix from rows of arbitrary integers, reducing mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Shape(format!(
                    "ragged rows: expected {cols} columns, got {}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&v| field.from_i64(v)));
        }
        Ok(FpMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = self.field.reduce(v);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Columns `start..end` as a new matrix.
    pub fn columns(&self, start: usize, end: usize) -> Self {
        let mut m = Self::zeros(self.field, self.rows, end - start);
        for r in 0..self.rows {
            for c in start..end {
                m.data[r * (end - start) + c - start] = self.get(r, c);
            }
        }
        m
    }

    pub fn mul(&self, rhs: &FpMatrix) -> Result<FpMatrix> {
        if self.field != rhs.field {
            return Err(Error::Context("matrices over different fields".into()));
        }
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, rhs.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// `self^k` by square and multiply; `k = 0` gives the identity.
    pub fn pow(&self, mut k: u64) -> Result<FpMatrix> {
        if !self.is_square() {
            return Err(Error::Shape("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.field, self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Row rank by Gaussian elimination, pivoting on the first nonzero entry.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce()
    }

    /// In-place reduction to reduced row echelon form; returns the rank.
    fn row_reduce(&mut self) -> usize {
        let f = self.field;
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(piv) = (rank..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(piv, rank);
            let inv = f.inv(self.get(rank, col)).expect("pivot is nonzero");
            for c in col..self.cols {
                let v = f.mul(self.get(rank, c), inv);
                self.data[rank * self.cols + c] = v;
            }
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(rank, c)));
                    self.data[r * self.cols + c] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn inverse(&self) -> Result<FpMatrix> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.data[r * 2 * n + c] = self.get(r, c);
            }
            aug.data[r * 2 * n + n + r] = 1;
        }
        aug.row_reduce();
        for i in 0..n {
            if aug.get(i, i) != 1 {
                return Err(Error::InvalidTransform("matrix is singular".into()));
            }
        }
        Ok(aug.columns(n, 2 * n))
    }

    /// Index of the last nonzero power: `Some(r)` with `C^r != 0` and
    /// `C^(r+1) = 0`, or `None` when the matrix is not nilpotent.
    pub fn nilpotency_index(&self) -> Option<u32> {
        let n = self.rows;
        let mut power = Self::identity(self.field, n);
        for r in 0..=n as u32 {
            let next = power.mul(self).ok()?;
            if next.is_zero() {
                return Some(r);
            }
            power = next;
        }
        None
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Expresses `target` as a linear combination of `vectors`.
///
/// Returns `Ok(None)` when `target` is outside their span. When a combination
/// is returned, free coefficients are zero.
pub fn solve_in_span(
    field: PrimeField,
    vectors: &[Vec<u64>],
    target: &[u64],
) -> Result<Option<Vec<u64>>> {
    let dim = target.len();
    if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::Shape(format!(
            "vector of length {} against target of length {dim}",
            v.len()
        )));
    }
    let n = vectors.len();
    // columns are the vectors, last column the target
    let mut m = FpMatrix::zeros(field, dim, n + 1);
    for (j, v) in vectors.iter().enumerate() {
        for (i, &x) in v.iter().enumerate() {
            m.data[i * (n + 1) + j] = field.reduce(x);
        }
    }
    for (i, &x) in target.iter().enumerate() {
        m.data[i * (n + 1) + n] = field.reduce(x);
    }
    let rank = m.row_reduce();
    let mut coeffs = vec![0u64; n];
    for r in 0..rank {
        let lead = (0..=n).find(|&c| m.get(r, c) != 0).expect("nonzero row");
        if lead == n {
            return Ok(None);
        }
        coeffs[lead] = m.get(r, n);
    }
    Ok(Some(coeffs))
}
