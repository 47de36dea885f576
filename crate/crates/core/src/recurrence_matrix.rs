//! The transfer matrix `M_A` with `ω_{k+1}(m) = M_A ω_k(m)` and its
//! characteristic polynomial `g(λ) = det(M_A - λI)`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::counting::OmegaVector;
use crate::digit_set::DigitSet;
use crate::error::{Error, Result};

/// Square 0/1 matrix indexed `0..=a_z`, `m[α][β] = [2β - α ∈ A]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferMatrix {
    dim: usize,
    entries: Vec<u8>,
}

impl TransferMatrix {
    pub fn build(alphabet: &DigitSet) -> Self {
        let dim = alphabet.max_digit() as usize + 1;
        let mut entries = vec![0u8; dim * dim];
        for alpha in 0..dim {
            for beta in 0..dim {
                let diff = 2 * beta as i64 - alpha as i64;
                entries[alpha * dim + beta] = u8::from(alphabet.contains(diff));
            }
        }
        TransferMatrix { dim, entries }
    }

    /// Wraps explicit rows; every entry must be 0 or 1 and the rows square.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            entries.extend(row.iter().map(|&e| u8::from(e != 0)));
        }
        Ok(TransferMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, alpha: usize, beta: usize) -> u8 {
        self.entries[alpha * self.dim + beta]
    }

    pub fn row(&self, alpha: usize) -> &[u8] {
        &self.entries[alpha * self.dim..(alpha + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.dim).map(|a| self.row(a).to_vec()).collect()
    }

    /// `M ω_k(m)`, which equals `ω_{k+1}(m)`.
    pub fn step(&self, v: &OmegaVector) -> Result<OmegaVector> {
        if v.entries.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.entries.len(),
            });
        }
        let entries = (0..self.dim)
            .map(|a| {
                self.row(a)
                    .iter()
                    .zip(&v.entries)
                    .filter(|(&e, _)| e == 1)
                    .map(|(_, x)| x)
                    .sum::<BigUint>()
            })
            .collect();
        Ok(OmegaVector { k: v.k + 1, m: v.m, entries })
    }

    /// `det(M - λI)` by the Faddeev–LeVerrier recurrence over the integers.
    pub fn char_poly(&self) -> Result<IntPolynomial> {
        let n = self.dim;
        let a: Vec<BigInt> = self.entries.iter().map(|&e| BigInt::from(e)).collect();
        // monic[k] is the coefficient of λ^k in det(λI - M)
        let mut monic = vec![BigInt::zero(); n + 1];
        monic[n] = BigInt::one();
        let mut aux = vec![BigInt::zero(); n * n];
        for k in 1..=n {
            // aux <- M * aux + monic[n - k + 1] * I
            let mut next = mat_mul(&a, &aux, n);
            for i in 0..n {
                next[i * n + i] += &monic[n - k + 1];
            }
            aux = next;
            let trace: BigInt = (0..n)
                .map(|i| (0..n).map(|j| &a[i * n + j] * &aux[j * n + i]).sum::<BigInt>())
                .sum();
            let (q, rem) = (-trace).div_rem(&BigInt::from(k));
            if !rem.is_zero() {
                return Err(Error::InternalExactnessFailure { index: n - k });
            }
            monic[n - k] = q;
        }
        if n % 2 == 1 {
            for c in &mut monic {
                *c = -&*c;
            }
        }
        Ok(IntPolynomial::new(monic))
    }

    /// Maximum row sum, checked against `|A| - 1`.
    pub fn row_sum_bound_check(&self, alphabet: &DigitSet) -> Result<RowSumReport> {
        if !alphabet.has_odd() {
            return Err(Error::OddElementRequired { set: alphabet.to_string() });
        }
        let max_row_sum = (0..self.dim)
            .map(|a| self.row(a).iter().map(|&e| e as usize).sum::<usize>())
            .max()
            .unwrap_or(0);
        let bound = alphabet.cardinality() - 1;
        Ok(RowSumReport {
            max_row_sum,
            bound,
            holds: max_row_sum <= bound,
        })
    }
}

fn mat_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                let y = &b[k * n + j];
                if !y.is_zero() {
                    out[i * n + j] += x * y;
                }
            }
        }
    }
    out
}

impl fmt::Display for TransferMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 0..self.dim {
            let row: Vec<String> = self.row(a).iter().map(u8::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowSumReport {
    pub max_row_sum: usize,
    pub bound: usize,
    pub holds: bool,
}

/// Integer polynomial, coefficients stored constant term first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.len() > 1 && coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(BigInt::zero());
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coefficients.last().unwrap()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut out = vec![BigInt::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    /// `1,-3,3,...` constant term first.
    pub fn coefficient_list(&self) -> String {
        self.coefficients
            .iter()
            .map(BigInt::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() && !(first && k == 0) {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let coeff_shown = k == 0 || !magnitude.is_one();
            if coeff_shown {
                write!(f, "{magnitude}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}
