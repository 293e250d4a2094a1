//! Cartier–Manin matrices and the classification they imply.

use std::fmt;

use crate::curves::CurveModel;
use crate::error::{Error, Result};
use crate::field::{FpMatrix, PrimeField};
use crate::upoly::UniPoly;

/// Which columns `j` of `[c_{ip-j}]` to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Width {
    /// `j = 1..g`: the Cartier–Manin matrix.
    Square,
    /// `j = 1..2g+1`: the square block followed by the extra columns.
    Extended,
}

/// Coefficient matrix `[c_{i p^k - j}]` of `h^{(p^k-1)/2}`, rows `i = 1..g`.
fn coefficient_matrix(
    expansion: &UniPoly,
    field: PrimeField,
    pk: u64,
    genus: u32,
    cols: u32,
) -> FpMatrix {
    let g = genus as usize;
    let mut m = FpMatrix::zeros(field, g, cols as usize);
    for i in 1..=g as u64 {
        for j in 1..=cols as u64 {
            if let Some(idx) = (i * pk).checked_sub(j) {
                m.set(
                    i as usize - 1,
                    j as usize - 1,
                    expansion.coeff(idx as usize),
                );
            }
        }
    }
    m
}

fn check_curve_input(h: &UniPoly, genus: u32) -> Result<()> {
    if genus == 0 {
        return Err(Error::Argument("genus must be positive".into()));
    }
    let d = h.degree().unwrap_or(0);
    let g = genus as usize;
    if d != 2 * g + 1 && d != 2 * g + 2 {
        return Err(Error::Argument(format!(
            "h has degree {d}, expected {} or {} for genus {genus}",
            2 * g + 1,
            2 * g + 2
        )));
    }
    Ok(())
}

/// The Cartier–Manin matrix (or its extension) read off `h^{(p-1)/2}`.
pub fn cartier_manin(h: &UniPoly, genus: u32, width: Width) -> Result<FpMatrix> {
    check_curve_input(h, genus)?;
    let field = h.field();
    let p = field.modulus();
    let expansion = h.pow((p - 1) / 2);
    let cols = match width {
        Width::Square => genus,
        Width::Extended => 2 * genus + 1,
    };
    Ok(coefficient_matrix(&expansion, field, p, genus, cols))
}

/// `C_k = [c^{(k)}_{i p^k - j}]` from a direct expansion of `h^{(p^k-1)/2}`.
pub fn cartier_manin_direct(h: &UniPoly, genus: u32, k: u32) -> Result<FpMatrix> {
    check_curve_input(h, genus)?;
    if k == 0 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    let field = h.field();
    let pk = field
        .modulus()
        .checked_pow(k)
        .ok_or(Error::ExponentOverflow)?;
    let expansion = h.pow((pk - 1) / 2);
    Ok(coefficient_matrix(&expansion, field, pk, genus, genus))
}

pub fn power_matrix(c: &FpMatrix, k: u64) -> Result<FpMatrix> {
    c.pow(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Ordinary,
    /// `C = 0`
    Superspecial,
    /// Genus at most 2 with `C != 0` and `C^2 = 0`.
    Supersingular,
    /// Genus at least 3 with p-rank 0; supersingularity is not decided.
    PRankZeroNonordinary,
    Intermediate,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Ordinary => "ordinary",
            Classification::Superspecial => "superspecial",
            Classification::Supersingular => "supersingular",
            Classification::PRankZeroNonordinary => "p-rank-zero-nonordinary",
            Classification::Intermediate => "intermediate",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "ordinary" => Classification::Ordinary,
            "superspecial" => Classification::Superspecial,
            "supersingular" => Classification::Supersingular,
            "p-rank-zero-nonordinary" => Classification::PRankZeroNonordinary,
            "intermediate" => Classification::Intermediate,
            _ => return None,
        })
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Cartier–Manin data of one curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartierData {
    pub genus: u32,
    pub prime: u64,
    pub c: FpMatrix,
    /// `g x (2g+1)`; its first `g` columns are `c`.
    pub c_ext: FpMatrix,
    pub rank_c: usize,
    /// `rank(C^g)`, the p-rank.
    pub stable_rank: usize,
    /// Index of the last nonzero power of `C` when nilpotent.
    pub nilpotency: Option<u32>,
    pub classification: Classification,
    pub warnings: Vec<String>,
}

impl CartierData {
    pub fn from_curve(curve: &CurveModel) -> Result<CartierData> {
        Self::compute(&curve.h, curve.genus)
    }

    pub fn compute(h: &UniPoly, genus: u32) -> Result<CartierData> {
        let c_ext = cartier_manin(h, genus, Width::Extended)?;
        let c = c_ext.columns(0, genus as usize);
        let rank_c = c.rank();
        let stable_rank = c.pow(genus as u64)?.rank();
        let nilpotency = c.nilpotency_index();
        let prime = h.field().modulus();
        let mut data = CartierData {
            genus,
            prime,
            c,
            c_ext,
            rank_c,
            stable_rank,
            nilpotency,
            classification: Classification::Intermediate,
            warnings: Vec::new(),
        };
        data.classification = classify(&data);
        if prime < 7 {
            data.warnings.push(format!(
                "p = {prime} is below 7: the rank criterion for ordinarity is outside its stated range"
            ));
        }
        Ok(data)
    }

    pub fn p_rank(&self) -> usize {
        p_rank(self)
    }

    /// `C = 0` while the extended matrix is not: evidence (heuristic) that
    /// the level exceeds 2.
    pub fn extended_evidence(&self) -> bool {
        self.c.is_zero() && !self.c_ext.is_zero()
    }
}

pub fn p_rank(data: &CartierData) -> usize {
    data.stable_rank
}

pub fn classify(data: &CartierData) -> Classification {
    if data.c.is_zero() {
        Classification::Superspecial
    } else if data.rank_c == data.genus as usize {
        Classification::Ordinary
    } else if data.genus <= 2 && data.stable_rank == 0 {
        Classification::Supersingular
    } else if data.stable_rank == 0 {
        Classification::PRankZeroNonordinary
    } else {
        Classification::Intermediate
    }
}

/// Lower bound on the level: `r + 2` when `C` is nilpotent with last nonzero
/// power `r >= 1`, otherwise the generic bound 2.
pub fn level_lower_bound(data: &CartierData) -> Result<u32> {
    if data.genus < 2 {
        return Err(Error::Argument(format!(
            "level bound needs genus >= 2, got {}",
            data.genus
        )));
    }
    Ok(match data.nilpotency {
        Some(r) if r >= 1 => r + 2,
        _ => 2,
    })
}
