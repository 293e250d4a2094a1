//! Hyperelliptic models `y^2 = h(x)` over F_p.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::{Monomial, MultiPoly};
use crate::upoly::UniPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// `deg h = 2g + 1`
    Imaginary,
    /// `deg h = 2g + 2`
    Real,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel {
    pub genus: u32,
    pub kind: ModelKind,
    pub h: UniPoly,
    pub provenance: String,
}

impl CurveModel {
    pub fn field(&self) -> PrimeField {
        self.h.field()
    }

    pub fn prime(&self) -> u64 {
        self.h.field().modulus()
    }

    /// Validates `y^2 = h(x)`: squarefree `h` of degree at least 3.
    pub fn from_weierstrass(h: &MultiPoly, expected_genus: Option<u32>) -> Result<CurveModel> {
        Self::from_unipoly(UniPoly::from_multi(h)?, expected_genus)
    }

    pub fn from_unipoly(h: UniPoly, expected_genus: Option<u32>) -> Result<CurveModel> {
        let deg = h.degree().unwrap_or(0);
        if deg < 3 {
            return Err(Error::InvalidCurve(format!(
                "degree {deg} is too small for a curve of positive genus"
            )));
        }
        let genus = ((deg - 1) / 2) as u32;
        if let Some(g) = expected_genus {
            if g != genus {
                return Err(Error::InvalidCurve(format!(
                    "degree {deg} gives genus {genus}, expected {g}"
                )));
            }
        }
        if !h.is_squarefree() {
            return Err(Error::InvalidCurve("h has a multiple root".into()));
        }
        let kind = if deg % 2 == 1 {
            ModelKind::Imaginary
        } else {
            ModelKind::Real
        };
        Ok(CurveModel {
            genus,
            kind,
            h,
            provenance: String::new(),
        })
    }

    pub fn with_provenance(mut self, tag: impl Into<String>) -> Self {
        self.provenance = tag.into();
        self
    }

    /// `y^2 z^{2g-1} - h(x, z)` (imaginary) or `y^2 z^{2g} - h(x, z)` (real)
    /// in variables `(x, y, z)`.
    pub fn homogenize(&self) -> MultiPoly {
        let total = self.h.degree().unwrap() as u32;
        let f = self.field();
        let y2 = MultiPoly::monomial(f, Monomial::new(&[0, 2, total - 2]), 1);
        y2.sub(&self.h.homogenize_xz(total)).expect("same ring")
    }

    /// Smallest root of `h` in F_p, if any.
    pub fn rational_root(&self) -> Option<u64> {
        (0..self.prime()).find(|&a| self.h.eval(a) == 0)
    }

    /// Moves the root `a` to infinity: `x = a + 1/u`, `y = v / u^{g+1}`,
    /// giving `v^2 = u^{2g+2} h(a + 1/u) = sum_k b_k u^{2g+2-k}` where the
    /// `b_k` are the Taylor coefficients of `h` at `a`.
    pub fn to_imaginary(&self, a: u64) -> Result<CurveModel> {
        let f = self.field();
        let a = f.reduce(a);
        if self.h.eval(a) != 0 {
            return Err(Error::Argument(format!("{a} is not a root of h")));
        }
        let b = self.h.taylor_shift(a);
        let top = 2 * self.genus as usize + 2;
        let mut coeffs = vec![0u64; top + 1];
        for (k, &bk) in b.iter().enumerate() {
            coeffs[top - k] = bk;
        }
        let hstar = UniPoly::new(f, coeffs);
        if hstar.degree() != Some(top - 1) {
            return Err(Error::InvalidCurve(format!(
                "transformed model has degree {:?}, expected {}",
                hstar.degree(),
                top - 1
            )));
        }
        let tag = if self.provenance.is_empty() {
            format!("imaginary(a={a})")
        } else {
            format!("{}/imaginary(a={a})", self.provenance)
        };
        Ok(CurveModel::from_unipoly(hstar, Some(self.genus))?.with_provenance(tag))
    }

    /// The imaginary model: `self` if already imaginary, else the transform at
    /// the smallest rational root.
    pub fn imaginary_model(&self) -> Result<CurveModel> {
        match self.kind {
            ModelKind::Imaginary => Ok(self.clone()),
            ModelKind::Real => match self.rational_root() {
                Some(a) => self.to_imaginary(a),
                None => Err(Error::InvalidCurve(
                    "no rational root: imaginary model unavailable over F_p".into(),
                )),
            },
        }
    }

    pub fn h_string(&self) -> String {
        self.h.to_multi().to_string_with(&["x"])
    }
}

impl fmt::Display for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = {} over F_{}", self.h_string(), self.prime())
    }
}

/// Superspecial families of arbitrary genus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `h = x^{2g+1} + mu x`
    MuX,
    /// `h = x^{2g+1} + mu`
    MuConst,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::MuX => "mu_x",
            Family::MuConst => "mu_const",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prediction {
    Superspecial,
    NotSuperspecial,
    /// No usable congruence is known for this family.
    Unknown,
}

/// Builds a family member together with the congruence prediction:
/// `mu_x` is superspecial iff `p = 2g+1` or `p = -1` modulo `4g`.
pub fn family(
    kind: Family,
    genus: u32,
    mu: u64,
    field: PrimeField,
) -> Result<(CurveModel, Prediction)> {
    if genus < 2 {
        return Err(Error::Argument(format!(
            "family needs genus >= 2, got {genus}"
        )));
    }
    let mu = field.reduce(mu);
    if mu == 0 {
        return Err(Error::Argument("mu must be nonzero".into()));
    }
    let d = 2 * genus as usize + 1;
    let mut coeffs = vec![0u64; d + 1];
    coeffs[d] = 1;
    let prediction = match kind {
        Family::MuX => {
            coeffs[1] = mu;
            let p = field.modulus();
            let m = 4 * genus as u64;
            if p % m == (2 * genus as u64 + 1) % m || p % m == m - 1 {
                Prediction::Superspecial
            } else {
                Prediction::NotSuperspecial
            }
        }
        Family::MuConst => {
            coeffs[0] = mu;
            Prediction::Unknown
        }
    };
    let model = CurveModel::from_unipoly(UniPoly::new(field, coeffs), Some(genus))?
        .with_provenance(format!("{}:mu={mu}", kind.name()));
    Ok((model, prediction))
}

const RANDOM_RETRIES: usize = 10_000;

/// Uniformly random monic squarefree `h` of degree `2g+1`; the same
/// `(genus, field, seed)` always yields the same curve.
pub fn random_curve(genus: u32, field: PrimeField, seed: u64) -> Result<CurveModel> {
    if genus == 0 {
        return Err(Error::Argument("genus must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = 2 * genus as usize + 1;
    for _ in 0..RANDOM_RETRIES {
        let coeffs: Vec<u64> = (0..d)
            .map(|_| rng.random_range(0..field.modulus()))
            .chain(std::iter::once(1))
            .collect();
        let h = UniPoly::new(field, coeffs);
        if h.is_squarefree() {
            return Ok(CurveModel::from_unipoly(h, Some(genus))?
                .with_provenance(format!("random:seed={seed}")));
        }
    }
    Err(Error::Internal("no squarefree polynomial found".into()))
}

/// Mixes a sweep seed, sample index and prime into an independent stream
/// seed (splitmix64 finalizer).
pub fn task_seed(seed: u64, index: u64, prime: u64) -> u64 {
    let mut z = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(prime.wrapping_mul(0x8CB9_2BA7_2F3D_8DD7));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
