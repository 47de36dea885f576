//! Digit alphabets `A = {0 = a_0 < a_1 < ... < a_z}` and their even/odd split.
//!
//! Every alphabet is stored in canonical (ascending) order together with
//! the halves of its even elements (`b_i` with `2 b_i ∈ A`) and of its odd
//! elements (`c_i` with `2 c_i + 1 ∈ A`). Those two lists drive the parity
//! recurrences used everywhere else in the crate.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default upper bound on the largest digit `a_z`.
pub const DEFAULT_MAX_DIGIT: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitSet {
    elements: Vec<u64>,
    evens: Vec<u64>,
    odds: Vec<u64>,
}

impl DigitSet {
    /// Builds an alphabet from arbitrary-order digits, capped at [`DEFAULT_MAX_DIGIT`].
    pub fn new<I: IntoIterator<Item = u64>>(digits: I) -> Result<Self> {
        Self::with_cap(digits, DEFAULT_MAX_DIGIT)
    }

    pub fn with_cap<I: IntoIterator<Item = u64>>(digits: I, cap: u64) -> Result<Self> {
        let mut elements: Vec<u64> = digits.into_iter().collect();
        if elements.is_empty() {
            return Err(Error::EmptySet);
        }
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0]));
        }
        if elements[0] != 0 {
            return Err(Error::MissingZero);
        }
        let max = *elements.last().unwrap();
        if max > cap {
            return Err(Error::TooLarge { max, cap });
        }
        let evens = elements.iter().filter(|&&a| a % 2 == 0).map(|a| a / 2).collect();
        let odds = elements.iter().filter(|&&a| a % 2 == 1).map(|a| a / 2).collect();
        Ok(DigitSet { elements, evens, odds })
    }

    /// Parses a comma-separated list such as `"0,1,8"`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_cap(text, DEFAULT_MAX_DIGIT)
    }

    pub fn parse_with_cap(text: &str, cap: u64) -> Result<Self> {
        let text = text.trim();
        let text = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(text);
        if text.trim().is_empty() {
            return Err(Error::EmptySet);
        }
        let mut digits = Vec::new();
        for token in text.split(',') {
            let token = token.trim();
            match token.parse::<u64>() {
                Ok(d) => digits.push(d),
                Err(_) => {
                    let negative = token
                        .strip_prefix('-')
                        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()));
                    return Err(if negative {
                        Error::NegativeElement(token.to_string())
                    } else {
                        Error::InvalidToken { token: token.to_string() }
                    });
                }
            }
        }
        Self::with_cap(digits, cap)
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    /// The `b_i`: halves of the even digits, starting with `b_1 = 0`.
    pub fn evens(&self) -> &[u64] {
        &self.evens
    }

    /// The `c_i`: `(a - 1) / 2` for each odd digit `a`.
    pub fn odds(&self) -> &[u64] {
        &self.odds
    }

    /// `a_z`, the largest digit.
    pub fn max_digit(&self) -> u64 {
        *self.elements.last().unwrap()
    }

    /// `|A|`.
    pub fn cardinality(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, digit: i64) -> bool {
        digit >= 0 && self.elements.binary_search(&(digit as u64)).is_ok()
    }

    pub fn has_odd(&self) -> bool {
        !self.odds.is_empty()
    }

    /// `{a_z - a : a ∈ A}`.
    pub fn reflect(&self) -> DigitSet {
        let top = self.max_digit();
        let elements: Vec<u64> = self.elements.iter().rev().map(|a| top - a).collect();
        let evens = elements.iter().filter(|&&a| a % 2 == 0).map(|a| a / 2).collect();
        let odds = elements.iter().filter(|&&a| a % 2 == 1).map(|a| a / 2).collect();
        DigitSet { elements, evens, odds }
    }

    /// `{0,1,8}` style rendering used in tables.
    pub fn braced(&self) -> String {
        format!("{{{self}}}")
    }

    /// File-name-safe key, e.g. `0_1_8`.
    pub fn key(&self) -> String {
        self.elements
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join("_")
    }
}

impl fmt::Display for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for DigitSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DigitSet::parse(s)
    }
}
