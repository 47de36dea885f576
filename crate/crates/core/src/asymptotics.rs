//! Exact growth coefficient `c(A, m) = lim s_A(r, m) / |A|^r`.
//!
//! With `g(λ) = Σ α_k λ^k = det(M_A - λI)`, every window vector satisfies
//! `Σ α_k ω_{r+k}(m) = 0`, so the boundary terms `h(r)` are annihilated by
//! `g` and
//!
//! ```text
//! Σ_k α_k s_A(r + k, m) = c(A, m) |A|^r g(|A|).
//! ```
//!
//! The left side is an exact integer and `g(|A|) != 0` once `A` has an odd
//! digit (every eigenvalue of `M_A` is bounded by its largest row sum,
//! at most `|A| - 1`). [`growth_coefficient`] evaluates this quotient at
//! consecutive `r` and accepts it once three candidates agree exactly.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::counting::{CountingContext, DEFAULT_SUMMATION_BUDGET};
use crate::digit_set::DigitSet;
use crate::error::{Error, Result};
use crate::recurrence_matrix::{IntPolynomial, TransferMatrix};

pub const DEFAULT_R_MAX: u32 = 40;
pub const DEFAULT_DECIMAL_PLACES: usize = 3;
/// Largest `r` accepted by [`ratio_trace`].
pub const MAX_TRACE_R: u32 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthOptions {
    pub r_max: u32,
    pub decimal_places: usize,
    pub summation_budget: u64,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        GrowthOptions {
            r_max: DEFAULT_R_MAX,
            decimal_places: DEFAULT_DECIMAL_PLACES,
            summation_budget: DEFAULT_SUMMATION_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthReport {
    pub alphabet: DigitSet,
    pub multiplier: u64,
    pub coefficient: BigRational,
    pub decimal: String,
    pub r_used: u32,
    pub stability_window: Vec<(u32, BigRational)>,
}

/// Wire form of a [`GrowthReport`]; rationals travel as `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthReportRecord {
    pub set: String,
    pub m: u64,
    pub c: String,
    pub decimal: String,
    pub r_used: u32,
    pub window: Vec<(u32, String)>,
}

impl GrowthReport {
    pub fn record(&self) -> GrowthReportRecord {
        GrowthReportRecord {
            set: self.alphabet.to_string(),
            m: self.multiplier,
            c: self.coefficient.to_string(),
            decimal: self.decimal.clone(),
            r_used: self.r_used,
            window: self
                .stability_window
                .iter()
                .map(|(r, c)| (*r, c.to_string()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.record()).expect("report serializes")
    }

    /// `c = p/q (≈ d.ddd), r_used = r`
    pub fn summary(&self) -> String {
        format!(
            "c = {} (≈ {}), r_used = {}",
            self.coefficient, self.decimal, self.r_used
        )
    }
}

/// Smallest admissible starting block: `max(1, min{r : 2^r m >= a_z + 1})`.
pub fn first_stable_r(alphabet: &DigitSet, m: u64) -> u32 {
    let need = alphabet.max_digit() + 1;
    let mut r = 0;
    while (m as u128) << r < need as u128 {
        r += 1;
    }
    r.max(1)
}

/// Everything the quotient needs for one `(A, m)`: `g`, `g(|A|)` and a
/// growing table of block sums.
struct Annihilator {
    ctx: CountingContext,
    poly: IntPolynomial,
    g_at_size: BigInt,
    size: BigInt,
    m: u64,
    sums: Vec<BigUint>,
}

impl Annihilator {
    fn new(alphabet: &DigitSet, m: u64, budget: u64) -> Result<Self> {
        let poly = TransferMatrix::build(alphabet).char_poly()?;
        let size = BigInt::from(alphabet.cardinality());
        let g_at_size = poly.eval(&size);
        Ok(Annihilator {
            ctx: CountingContext::new(alphabet.clone()).with_budget(budget),
            poly,
            g_at_size,
            size,
            m,
            sums: Vec::new(),
        })
    }

    fn ensure(&mut self, r_end: u32) -> Result<()> {
        if self.sums.len() > r_end as usize {
            return Ok(());
        }
        if self.sums.is_empty() {
            self.sums = self.ctx.summatory_series(r_end, self.m)?;
            return Ok(());
        }
        let mut current = BigInt::from(self.sums.last().unwrap().clone());
        for r in self.sums.len() as u32..=r_end {
            current = &self.size * &current + self.ctx.h_term(r, self.m);
            self.sums.push(current.to_biguint().expect("block sums are non-negative"));
        }
        Ok(())
    }

    /// `Σ_k α_k s_A(r + k, m)`.
    fn sum(&mut self, r: u32) -> Result<BigInt> {
        let degree = self.poly.degree() as u32;
        self.ensure(r + degree)?;
        Ok(self
            .poly
            .coefficients()
            .iter()
            .enumerate()
            .map(|(k, alpha)| alpha * BigInt::from(self.sums[r as usize + k].clone()))
            .sum())
    }

    fn candidate(&mut self, r: u32) -> Result<BigRational> {
        let numer = self.sum(r)?;
        let denom = Pow::pow(&self.size, r) * &self.g_at_size;
        Ok(BigRational::new(numer, denom))
    }
}

fn require_odd(alphabet: &DigitSet) -> Result<()> {
    if alphabet.has_odd() {
        Ok(())
    } else {
        Err(Error::OddElementRequired { set: alphabet.to_string() })
    }
}

pub fn growth_coefficient(alphabet: &DigitSet, m: u64) -> Result<GrowthReport> {
    growth_coefficient_with(alphabet, m, &GrowthOptions::default())
}

pub fn growth_coefficient_with(
    alphabet: &DigitSet,
    m: u64,
    options: &GrowthOptions,
) -> Result<GrowthReport> {
    assert!(m >= 1, "multiplier must be at least 1");
    require_odd(alphabet)?;
    let mut ann = Annihilator::new(alphabet, m, options.summation_budget)?;
    let start = first_stable_r(alphabet, m);
    let mut window: Vec<(u32, BigRational)> = Vec::new();
    let mut r = start;
    while r <= options.r_max {
        let c = ann.candidate(r)?;
        if window.last().is_some_and(|(_, prev)| *prev != c) {
            window.clear();
        }
        window.push((r, c));
        if window.len() == 3 {
            let (r_used, coefficient) = window[0].clone();
            return Ok(GrowthReport {
                alphabet: alphabet.clone(),
                multiplier: m,
                decimal: to_decimal(&coefficient, options.decimal_places),
                coefficient,
                r_used,
                stability_window: window,
            });
        }
        r += 1;
    }
    Err(Error::StabilityFailure {
        set: alphabet.to_string(),
        m,
        r_max: options.r_max,
    })
}

/// `Σ_k α_k s_A(r + k, m)` as an exact integer.
pub fn annihilated_sum(alphabet: &DigitSet, r: u32, m: u64) -> Result<BigInt> {
    Annihilator::new(alphabet, m, DEFAULT_SUMMATION_BUDGET)?.sum(r)
}

/// The candidate quotient at each `r` in `r_range`, without the stability search.
pub fn candidates(
    alphabet: &DigitSet,
    m: u64,
    r_range: std::ops::RangeInclusive<u32>,
) -> Result<Vec<(u32, BigRational)>> {
    require_odd(alphabet)?;
    let mut ann = Annihilator::new(alphabet, m, DEFAULT_SUMMATION_BUDGET)?;
    r_range.map(|r| Ok((r, ann.candidate(r)?))).collect()
}

/// `s_A(r, m) / |A|^r` for `0 <= r <= r_max`.
pub fn ratio_trace(alphabet: &DigitSet, m: u64, r_max: u32) -> Result<Vec<(u32, BigRational)>> {
    require_odd(alphabet)?;
    if r_max > MAX_TRACE_R {
        return Err(Error::BudgetExceeded {
            terms: format!("r_max = {r_max}"),
            budget: MAX_TRACE_R as u64,
        });
    }
    let mut ctx = CountingContext::new(alphabet.clone());
    let size = BigInt::from(alphabet.cardinality());
    let sums = ctx.summatory_series(r_max, m)?;
    let mut power = BigInt::one();
    let mut out = Vec::with_capacity(sums.len());
    for (r, s) in sums.into_iter().enumerate() {
        out.push((r as u32, BigRational::new(BigInt::from(s), power.clone())));
        power *= &size;
    }
    Ok(out)
}

/// Bounds on `c({0,1,t}, 1)` with `k` chosen so that `2^k < t <= 2^(k+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds01t {
    pub t: u64,
    pub k: u32,
    /// `2^(k+2) / 3^(k+2)`
    pub lower: BigRational,
    /// `2^(k+1) / 3^k`
    pub upper: BigRational,
}

pub fn bounds_01t(t: u64) -> Result<Bounds01t> {
    if t < 2 {
        return Err(Error::InvalidT(t));
    }
    let k = 64 - (t - 1).leading_zeros() - 1;
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let lower = BigRational::new(Pow::pow(&two, k + 2), Pow::pow(&three, k + 2));
    let upper = BigRational::new(Pow::pow(&two, k + 1), Pow::pow(&three, k));
    Ok(Bounds01t { t, k, lower, upper })
}

/// Rounds `q` to `places` decimals, halves away from zero.
pub fn to_decimal(q: &BigRational, places: usize) -> String {
    let scale = Pow::pow(&BigInt::from(10), places);
    let scaled = q.abs() * BigRational::from_integer(scale.clone());
    let twice = scaled * BigRational::from_integer(BigInt::from(2));
    // round(x) = floor((2x + 1) / 2)
    let rounded = ((twice + BigRational::one()) / BigRational::from_integer(BigInt::from(2))).floor();
    let digits = rounded.to_integer();
    let (int_part, frac_part) = digits.div_rem(&scale);
    let sign = if q.is_negative() && !digits.is_zero() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = places)
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(text.parse().ok()?)),
    }
}
