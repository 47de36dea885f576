//! Representation counts `f_A(n)` and their dyadic block sums.
//!
//! `f_A(n)` is the number of digit strings `(ε_0, ε_1, ...)` over `A` with
//! `n = Σ ε_i 2^i`. With the conventions `f_A(0) = 1` and `f_A(n) = 0` for
//! `n < 0` it satisfies, for every `ℓ >= 0`,
//!
//! ```text
//! f_A(2ℓ)     = Σ_i f_A(ℓ - b_i)
//! f_A(2ℓ + 1) = Σ_i f_A(ℓ - c_i)
//! ```
//!
//! [`CountingContext`] evaluates this recurrence with a sparse memo.
//! [`count_bruteforce`] enumerates digit strings directly and shares no code
//! with it, so the two can be checked against each other.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::digit_set::DigitSet;
use crate::error::{Error, Result};

/// Default largest `n` accepted by the brute-force enumerator.
pub const DEFAULT_ORACLE_CAP: u64 = 1 << 20;
/// Default largest number of terms a direct block summation may add up.
pub const DEFAULT_SUMMATION_BUDGET: u64 = 1 << 26;

const CHUNK: i64 = 1 << 16;

/// `ω_k(m) = (f_A(2^k m), f_A(2^k m - 1), ..., f_A(2^k m - a_z))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaVector {
    pub k: u32,
    pub m: u64,
    pub entries: Vec<BigUint>,
}

/// Memoized evaluator of `f_A`.
///
/// A context is not meant to be shared between threads while in use; build
/// one per alphabet (they are cheap) when working in parallel.
#[derive(Debug, Clone)]
pub struct CountingContext {
    alphabet: DigitSet,
    memo: HashMap<BigInt, BigUint>,
    budget: u64,
}

impl CountingContext {
    pub fn new(alphabet: DigitSet) -> Self {
        CountingContext {
            alphabet,
            memo: HashMap::new(),
            budget: DEFAULT_SUMMATION_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn alphabet(&self) -> &DigitSet {
        &self.alphabet
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// `f_A(n)` for any integer `n`.
    pub fn count<N: Into<BigInt>>(&mut self, n: N) -> BigUint {
        self.count_ref(&n.into())
    }

    fn count_ref(&mut self, n: &BigInt) -> BigUint {
        if n.is_negative() {
            return BigUint::zero();
        }
        if n.is_zero() {
            return BigUint::one();
        }
        if let Some(v) = self.memo.get(n) {
            return v.clone();
        }
        let half: BigInt = n >> 1u32;
        let offsets = if n.is_even() {
            self.alphabet.evens().to_vec()
        } else {
            self.alphabet.odds().to_vec()
        };
        let mut total = BigUint::zero();
        for d in offsets {
            total += self.count_ref(&(&half - d));
        }
        self.memo.insert(n.clone(), total.clone());
        total
    }

    /// The window vector `ω_k(m)`.
    pub fn omega(&mut self, k: u32, m: u64) -> OmegaVector {
        let top = BigInt::from(m) << k;
        let entries = (0..=self.alphabet.max_digit())
            .map(|j| self.count_ref(&(&top - j)))
            .collect();
        OmegaVector { k, m, entries }
    }

    /// `s_A(r, m)`: the sum of `f_A(n)` over `m 2^r <= n < m 2^(r+1)`, added
    /// up term by term.
    pub fn summatory(&mut self, r: u32, m: u64) -> Result<BigUint> {
        let terms = BigUint::from(m) << r;
        let lo = match terms.to_u64().filter(|&t| t <= self.budget) {
            Some(t) => t as i64,
            None => {
                return Err(Error::BudgetExceeded {
                    terms: terms.to_string(),
                    budget: self.budget,
                })
            }
        };
        let hi = 2 * lo - 1;
        let mut total = BigUint::zero();
        let mut start = lo;
        while start <= hi {
            let end = (start + CHUNK - 1).min(hi);
            match self.dense_range(start, end) {
                Some(values) => {
                    let mut acc: u128 = 0;
                    let mut spill = BigUint::zero();
                    for v in values {
                        match acc.checked_add(v) {
                            Some(s) => acc = s,
                            None => {
                                spill += acc;
                                acc = v;
                            }
                        }
                    }
                    total += spill + acc;
                }
                None => {
                    for n in start..=end {
                        total += self.count(n);
                    }
                }
            }
            start = end + 1;
        }
        Ok(total)
    }

    /// `f_A(n)` for every `n` in `lo..=hi`, or `None` if a value overflows `u128`.
    fn dense_range(&mut self, lo: i64, hi: i64) -> Option<Vec<u128>> {
        let span = self.alphabet.max_digit() as i64 + 1;
        if hi - lo < 2 * span || hi < 4 * span {
            return (lo..=hi).map(|n| self.count(n).to_u128()).collect();
        }
        let child_lo = (lo - span).div_euclid(2);
        let child = self.dense_range(child_lo, hi.div_euclid(2))?;
        let evens = self.alphabet.evens();
        let odds = self.alphabet.odds();
        let mut out = Vec::with_capacity((hi - lo + 1) as usize);
        for n in lo..=hi {
            let value = if n < 0 {
                0
            } else if n == 0 {
                1
            } else {
                let half = n >> 1;
                let offsets = if n & 1 == 0 { evens } else { odds };
                let mut acc: u128 = 0;
                for &d in offsets {
                    let idx = half - d as i64 - child_lo;
                    if idx >= 0 {
                        acc = acc.checked_add(child[idx as usize])?;
                    }
                }
                acc
            };
            out.push(value);
        }
        Some(out)
    }

    /// The boundary term `h(r)` in `s_A(r, m) = |A| s_A(r - 1, m) + h(r)`.
    ///
    /// Panics if `r == 0`.
    pub fn h_term(&mut self, r: u32, m: u64) -> BigInt {
        assert!(r >= 1, "h_term requires r >= 1");
        let lower = BigInt::from(m) << (r - 1);
        let upper = BigInt::from(m) << r;
        let reach = self
            .alphabet
            .evens()
            .iter()
            .chain(self.alphabet.odds())
            .copied()
            .max()
            .unwrap_or(0);
        // prefix[d] = Σ_{j=1}^{d} (f(m 2^(r-1) - j) - f(m 2^r - j))
        let mut prefix = Vec::with_capacity(reach as usize + 1);
        prefix.push(BigInt::zero());
        for j in 1..=reach {
            let a = BigInt::from(self.count_ref(&(&lower - j)));
            let b = BigInt::from(self.count_ref(&(&upper - j)));
            let next = prefix.last().unwrap() + a - b;
            prefix.push(next);
        }
        self.alphabet
            .evens()
            .iter()
            .chain(self.alphabet.odds())
            .map(|&d| &prefix[d as usize])
            .sum()
    }

    /// `s_A(0, m), ..., s_A(r_end, m)` from one direct sum at `r = 0` and the
    /// recurrence `s(r) = |A| s(r - 1) + h(r)`.
    pub fn summatory_series(&mut self, r_end: u32, m: u64) -> Result<Vec<BigUint>> {
        let size = BigInt::from(self.alphabet.cardinality());
        let mut current = BigInt::from(self.summatory(0, m)?);
        let mut out = Vec::with_capacity(r_end as usize + 1);
        out.push(current.to_biguint().unwrap());
        for r in 1..=r_end {
            current = &size * &current + self.h_term(r, m);
            out.push(
                current
                    .to_biguint()
                    .expect("block sums are non-negative"),
            );
        }
        Ok(out)
    }

    /// Loads `n<TAB>count` records, returning how many were read.
    pub fn load_memo<R: BufRead>(&mut self, reader: R) -> Result<usize> {
        let mut loaded = 0;
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: &str| Error::CacheFormat {
                line: i + 1,
                reason: reason.to_string(),
            };
            let (n, count) = line.split_once('\t').ok_or_else(|| bad("expected n<TAB>count"))?;
            let n: BigInt = n.parse().map_err(|_| bad("bad argument"))?;
            let count: BigUint = count.parse().map_err(|_| bad("bad count"))?;
            if n.is_negative() {
                return Err(bad("negative argument"));
            }
            if !n.is_zero() {
                self.memo.insert(n, count);
                loaded += 1;
            }
        }
        Ok(loaded)
    }

    /// Writes the memo as `n<TAB>count` lines in ascending `n`.
    pub fn write_memo<W: Write>(&self, mut writer: W) -> Result<()> {
        let mut entries: Vec<_> = self.memo.iter().collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(b.0));
        for (n, count) in entries {
            writeln!(writer, "{n}\t{count}")?;
        }
        Ok(())
    }
}

/// `f_A(n)` by enumerating every digit string, with the default cap.
pub fn count_bruteforce(alphabet: &DigitSet, n: u64) -> Result<u64> {
    count_bruteforce_with_cap(alphabet, n, DEFAULT_ORACLE_CAP)
}

pub fn count_bruteforce_with_cap(alphabet: &DigitSet, n: u64, cap: u64) -> Result<u64> {
    if n > cap {
        return Err(Error::OracleCapExceeded { n, cap });
    }
    let top = 63 - n.max(1).leading_zeros();
    Ok(enumerate(alphabet.elements(), alphabet.max_digit(), top as i32, n))
}

// Chooses ε_pos, ε_pos-1, ..., ε_0 in turn. Digits with ε·2^pos above the
// remaining target are skipped, as are partial strings whose remainder the
// lower positions can no longer reach.
fn enumerate(digits: &[u64], max_digit: u64, pos: i32, remaining: u64) -> u64 {
    if pos < 0 {
        return u64::from(remaining == 0);
    }
    let weight = 1u64 << pos;
    let reachable_below = max_digit * (weight - 1);
    let mut ways = 0;
    for &d in digits {
        let used = d * weight;
        if used > remaining {
            break;
        }
        if remaining - used <= reachable_below {
            ways += enumerate(digits, max_digit, pos - 1, remaining - used);
        }
    }
    ways
}
