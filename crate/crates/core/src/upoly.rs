//! Dense univariate polynomials over F_p, used for curve equations.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::{Monomial, MultiPoly};

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl UniPoly {
    pub fn new(field: PrimeField, coeffs: Vec<u64>) -> Self {
        let mut p = UniPoly {
            field,
            coeffs: coeffs.into_iter().map(|c| field.reduce(c)).collect(),
        };
        p.trim();
        p
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// From a one-variable sparse polynomial.
    pub fn from_multi(f: &MultiPoly) -> Result<Self> {
        if f.nvars() != 1 {
            return Err(Error::Argument(format!(
                "expected a univariate polynomial, got {} variables",
                f.nvars()
            )));
        }
        let deg = f.degree().unwrap_or(0) as usize;
        let mut coeffs = vec![0; deg + 1];
        for (m, c) in f.terms() {
            coeffs[m.exps()[0] as usize] = *c;
        }
        Ok(Self::new(f.field(), coeffs))
    }

    pub fn to_multi(&self) -> MultiPoly {
        MultiPoly::from_terms(
            self.field,
            1,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (Monomial::new(&[i as u32]), c)),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> UniPoly {
        let f = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.reduce(i as u64), c))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::new(self.field, vec![]);
        }
        let f = self.field;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    pub fn pow(&self, mut n: u64) -> UniPoly {
        let mut acc = Self::new(self.field, vec![1]);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        let f = self.field;
        let dd = d.degree().expect("division by zero polynomial");
        let inv = f.inv(d.leading()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let c = f.mul(r[k], inv);
            if c != 0 {
                for (i, &dc) in d.coeffs.iter().enumerate() {
                    let idx = k - dd + i;
                    r[idx] = f.sub(r[idx], f.mul(c, dc));
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        Self::new(f, r)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let inv = a.field.inv(a.leading()).unwrap();
        Self::new(
            a.field,
            a.coeffs.iter().map(|&c| a.field.mul(c, inv)).collect(),
        )
    }

    /// `gcd(h, h') = 1`. Polynomials with vanishing derivative are p-th
    /// powers and never squarefree unless constant.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Coefficients `b_k` of `h(x) = sum_k b_k (x - a)^k`, by repeated
    /// synthetic division by `x - a`.
    pub fn taylor_shift(&self, a: u64) -> Vec<u64> {
        let f = self.field;
        let mut cur = self.coeffs.clone();
        let mut out = Vec::with_capacity(cur.len());
        while !cur.is_empty() {
            // divide cur by (x - a): Horner from the top
            let n = cur.len();
            let mut quot = vec![0u64; n - 1];
            let mut carry = 0u64;
            for i in (0..n).rev() {
                let v = f.add(cur[i], f.mul(carry, a));
                if i == 0 {
                    out.push(v);
                } else {
                    quot[i - 1] = v;
                }
                carry = v;
            }
            cur = quot;
        }
        out
    }

    /// Homogenization in `(x, y, z)` of degree `total`: `sum c_k x^k z^{total-k}`.
    pub fn homogenize_xz(&self, total: u32) -> MultiPoly {
        MultiPoly::from_terms(
            self.field,
            3,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (Monomial::new(&[k as u32, 0, total - k as u32]), c)),
        )
    }
}
