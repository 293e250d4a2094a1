#![allow(dead_code)]

use levelscope::{FpMatrix, Monomial, MultiPoly, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const XYZ: [&str; 3] = ["x", "y", "z"];

pub fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero homogeneous polynomial of degree `d` in three variables with
/// roughly `density` of the monomials present.
pub fn random_form(field: PrimeField, d: u32, density: f64, rng: &mut ChaCha8Rng) -> MultiPoly {
    loop {
        let mut terms: Vec<(Monomial, u64)> = Vec::new();
        for m in Monomial::all_of_degree(3, d) {
            if rng.random_bool(density) {
                terms.push((m, rng.random_range(1..field.modulus())));
            }
        }
        let f = MultiPoly::from_terms(field, 3, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_invertible(field: PrimeField, n: usize, rng: &mut ChaCha8Rng) -> FpMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| rng.random_range(0..field.modulus()) as i64)
                    .collect()
            })
            .collect();
        let a = FpMatrix::from_rows(field, &rows).unwrap();
        if a.rank() == n {
            return a;
        }
    }
}
