//! Reflection `A -> Ã = {a_z - a}`: `M_A` and `M_Ã` are conjugate under the
//! anti-diagonal permutation, so they share a characteristic polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{first_stable_r, growth_coefficient_with, GrowthOptions};
use crate::digit_set::DigitSet;
use crate::error::{Error, Result};
use crate::recurrence_matrix::{IntPolynomial, TransferMatrix};

/// Anti-diagonal permutation matrix `S`, with `S = S^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReversalMatrix {
    dim: usize,
}

impl ReversalMatrix {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "reversal matrix needs dim >= 1");
        ReversalMatrix { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        u8::from(i + j == self.dim - 1)
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// `S M S` by explicit matrix products.
    pub fn conjugate(&self, m: &TransferMatrix) -> Result<TransferMatrix> {
        if m.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: m.dim() });
        }
        let s = self.rows();
        let product = multiply(&multiply(&s, &m.rows()), &s);
        TransferMatrix::from_rows(&product)
    }
}

fn multiply(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionReport {
    pub alphabet: DigitSet,
    pub reflected: DigitSet,
    /// First `(α, β)` with `m[α][β] != m'[a_z-α][a_z-β]`.
    pub entry_mismatch: Option<(usize, usize)>,
    /// `S M_Ã S == M_A`.
    pub similar: bool,
    pub charpoly: IntPolynomial,
    pub charpoly_reflected: IntPolynomial,
}

impl ReflectionReport {
    pub fn charpoly_equal(&self) -> bool {
        self.charpoly == self.charpoly_reflected
    }

    pub fn passed(&self) -> bool {
        self.entry_mismatch.is_none() && self.similar && self.charpoly_equal()
    }
}

pub fn verify_reflection(alphabet: &DigitSet) -> Result<ReflectionReport> {
    let reflected = alphabet.reflect();
    let m = TransferMatrix::build(alphabet);
    let mr = TransferMatrix::build(&reflected);
    let top = m.dim() - 1;
    let entry_mismatch = (0..=top)
        .flat_map(|a| (0..=top).map(move |b| (a, b)))
        .find(|&(a, b)| m.get(a, b) != mr.get(top - a, top - b));
    let s = ReversalMatrix::new(m.dim());
    let similar = s.conjugate(&mr)? == m;
    Ok(ReflectionReport {
        alphabet: alphabet.clone(),
        reflected,
        entry_mismatch,
        similar,
        charpoly: m.char_poly()?,
        charpoly_reflected: mr.char_poly()?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthPair {
    pub alphabet: DigitSet,
    pub reflected: DigitSet,
    pub c: BigRational,
    pub c_reflected: BigRational,
    pub charpoly_equal: bool,
    /// `|A|^r g_A(|A|)` and `|A|^r g_Ã(|A|)` at a common `r`.
    pub denominator: BigInt,
    pub denominator_reflected: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthPairRecord {
    pub set: String,
    pub reflected: String,
    pub c: String,
    pub c_reflected: String,
    pub charpoly_equal: bool,
}

impl GrowthPair {
    pub fn record(&self) -> GrowthPairRecord {
        GrowthPairRecord {
            set: self.alphabet.to_string(),
            reflected: self.reflected.to_string(),
            c: self.c.to_string(),
            c_reflected: self.c_reflected.to_string(),
            charpoly_equal: self.charpoly_equal,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.record()).expect("pair serializes")
    }
}

pub fn compare_growth_pair(alphabet: &DigitSet, m: u64) -> Result<GrowthPair> {
    compare_growth_pair_with(alphabet, m, &GrowthOptions::default())
}

pub fn compare_growth_pair_with(
    alphabet: &DigitSet,
    m: u64,
    options: &GrowthOptions,
) -> Result<GrowthPair> {
    let reflected = alphabet.reflect();
    for a in [alphabet, &reflected] {
        if !a.has_odd() {
            return Err(Error::OddElementRequired { set: a.to_string() });
        }
    }
    let c = growth_coefficient_with(alphabet, m, options)?.coefficient;
    let c_reflected = growth_coefficient_with(&reflected, m, options)?.coefficient;
    let g = TransferMatrix::build(alphabet).char_poly()?;
    let g_reflected = TransferMatrix::build(&reflected).char_poly()?;
    let size = BigInt::from(alphabet.cardinality());
    let scale = Pow::pow(&size, first_stable_r(alphabet, m));
    Ok(GrowthPair {
        denominator: &scale * g.eval(&size),
        denominator_reflected: &scale * g_reflected.eval(&size),
        charpoly_equal: g == g_reflected,
        alphabet: alphabet.clone(),
        reflected,
        c,
        c_reflected,
    })
}
