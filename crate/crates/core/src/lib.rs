//! Counting representations `n = Σ ε_i 2^i` with digits `ε_i` drawn from a
//! finite alphabet `A ∋ 0`, and the exact rational growth constant of their
//! dyadic block sums.
//!
//! ```
//! use binrep_core::{growth_coefficient, CountingContext, DigitSet};
//!
//! let a = DigitSet::parse("0,1,8").unwrap();
//! let mut ctx = CountingContext::new(a.clone());
//! assert_eq!(ctx.count(8u32), 2u32.into());
//! let report = growth_coefficient(&a, 1).unwrap();
//! assert_eq!(report.coefficient.to_string(), "137/338");
//! ```

pub mod asymptotics;
pub mod counting;
pub mod digit_set;
pub mod error;
pub mod recurrence_matrix;
pub mod symmetry;

pub use asymptotics::{
    annihilated_sum, bounds_01t, growth_coefficient, growth_coefficient_with, parse_rational,
    ratio_trace, to_decimal, Bounds01t, GrowthOptions, GrowthReport, GrowthReportRecord,
};
pub use counting::{count_bruteforce, count_bruteforce_with_cap, CountingContext, OmegaVector};
pub use digit_set::DigitSet;
pub use error::{Error, Result};
pub use recurrence_matrix::{IntPolynomial, RowSumReport, TransferMatrix};
pub use symmetry::{
    compare_growth_pair, compare_growth_pair_with, verify_reflection, GrowthPair, GrowthPairRecord,
    ReflectionReport, ReversalMatrix,
};
