//! `binrep verify`: published values (from a fixture), oracle agreement and
//! structural properties, reported one line per check.

use std::path::Path;

use binrep_core::{
    annihilated_sum, asymptotics::candidates, asymptotics::first_stable_r, bounds_01t,
    compare_growth_pair_with, count_bruteforce_with_cap, growth_coefficient_with, parse_rational,
    ratio_trace, to_decimal, verify_reflection, CountingContext, DigitSet, GrowthOptions,
    IntPolynomial, TransferMatrix,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{rngs::StdRng, Rng, SeedableRng};
use rayon::prelude::*;

use crate::{exit, CliConfig};

pub const PUBLISHED_FIXTURE: &str = include_str!("../fixtures/published_values.tsv");

/// Alphabets used by the oracle sweep and most property checks.
pub const NAMED_SETS: [&str; 7] = ["0,1", "0,1,3", "0,2,3", "0,1,8", "0,1,3,4", "0,2,3,6", "0,4,5,6,9"];

/// Every alphabet appearing in the published tables.
pub fn table_sets() -> Vec<DigitSet> {
    let mut sets: Vec<DigitSet> = (2..=17).map(|t| DigitSet::new([0, 1, t]).unwrap()).collect();
    for s in ["0,1,2,4", "0,1,3,4", "0,2,3,6", "0,1,6,9", "0,1,7,9", "0,4,5,6,9"] {
        let a = DigitSet::parse(s).unwrap();
        let r = a.reflect();
        sets.push(a);
        if !sets.contains(&r) {
            sets.push(r);
        }
    }
    sets
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Published constants listed in the fixture.
    #[value(name = "paper")]
    Published,
    Oracle,
    Properties,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Oracle sweep covers `0..=oracle_max`.
    pub oracle_max: u64,
    pub reflection_samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { oracle_max: 4096, reflection_samples: 200, seed: 0x5eed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    fn from_result(name: impl Into<String>, result: Result<String, String>) -> Self {
        match result {
            Ok(detail) => Check::new(name, true, detail),
            Err(detail) => Check::new(name, false, detail),
        }
    }
}

pub fn run(cfg: &CliConfig, suite: Suite, fixture: &str, opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Published | Suite::All) {
        checks.extend(published_checks(cfg, fixture));
    }
    if matches!(suite, Suite::Oracle | Suite::All) {
        checks.extend(oracle_checks(cfg, opts));
    }
    if matches!(suite, Suite::Properties | Suite::All) {
        checks.extend(property_checks(cfg, opts));
    }
    checks
}

pub fn render(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        out += &format!("{tag}  {}: {}\n", c.name, c.detail);
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    out += &format!("{passed}/{} checks passed\n", checks.len());
    out
}

/// Runs a suite and returns the report with its exit code.
pub fn cmd_verify(cfg: &CliConfig, suite: Suite, fixture: Option<&Path>) -> Result<(String, i32), crate::CliError> {
    let text = match fixture {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| crate::CliError::input(format!("{}: {e}", path.display())))?,
        None => PUBLISHED_FIXTURE.to_string(),
    };
    let checks = run(cfg, suite, &text, &VerifyOptions::default());
    let code = if checks.iter().all(|c| c.passed) { exit::SUCCESS } else { exit::VERIFY_FAILED };
    Ok((render(&checks), code))
}

// ------------------------------------------------------------ published

fn published_checks(cfg: &CliConfig, fixture: &str) -> Vec<Check> {
    let lines: Vec<(usize, Vec<&str>)> = fixture
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, fields)| !fields.is_empty())
        .collect();
    let options = cfg.growth_options();
    lines
        .par_iter()
        .map(|(line, fields)| {
            let name = format!("{} {}", fields[0], fields[1..].first().copied().unwrap_or(""));
            Check::from_result(name, fixture_row(fields, &options).map_err(|e| format!("line {line}: {e}")))
        })
        .collect()
}

fn set_arg(fields: &[&str], i: usize) -> Result<DigitSet, String> {
    let text = fields.get(i).ok_or("missing set")?;
    DigitSet::parse(text).map_err(|e| e.to_string())
}

fn rational_arg(fields: &[&str], i: usize) -> Result<BigRational, String> {
    let text = fields.get(i).ok_or("missing value")?;
    parse_rational(text).ok_or_else(|| format!("bad rational {text:?}"))
}

fn integer_arg<T: std::str::FromStr>(fields: &[&str], i: usize) -> Result<T, String> {
    let text = fields.get(i).ok_or("missing value")?;
    text.parse().map_err(|_| format!("bad integer {text:?}"))
}

fn places_of(decimal: &str) -> usize {
    decimal.split_once('.').map_or(0, |(_, f)| f.len())
}

fn expect_eq<T: PartialEq + std::fmt::Display>(what: &str, expected: &T, got: &T) -> Result<String, String> {
    if expected == got {
        Ok(format!("{what} = {got}"))
    } else {
        Err(format!("{what}: expected {expected}, got {got}"))
    }
}

fn fixture_row(fields: &[&str], options: &GrowthOptions) -> Result<String, String> {
    match fields[0] {
        "coeff" => {
            let a = set_arg(fields, 1)?;
            let expected = rational_arg(fields, 2)?;
            let report = growth_coefficient_with(&a, 1, options).map_err(|e| e.to_string())?;
            let mut detail = expect_eq(&format!("c({})", a.braced()), &expected, &report.coefficient)?;
            if let Some(decimal) = fields.get(3) {
                let got = to_decimal(&report.coefficient, places_of(decimal));
                detail += &format!(", {}", expect_eq("N", &decimal.to_string(), &got)?);
            }
            Ok(detail)
        }
        "annihilated" => {
            let a = set_arg(fields, 1)?;
            let r: u32 = integer_arg(fields, 2)?;
            let expected: BigInt = integer_arg(fields, 3)?;
            let got = annihilated_sum(&a, r, 1).map_err(|e| e.to_string())?;
            expect_eq(&format!("Σ α_k s(r+k) at r = {r}"), &expected, &got)
        }
        "g_at_size" => {
            let a = set_arg(fields, 1)?;
            let expected: BigInt = integer_arg(fields, 2)?;
            let g = TransferMatrix::build(&a).char_poly().map_err(|e| e.to_string())?;
            expect_eq("g(|A|)", &expected, &g.eval(&BigInt::from(a.cardinality())))
        }
        "charpoly" => {
            let a = set_arg(fields, 1)?;
            let list = fields.get(2).ok_or("missing coefficients")?;
            let coeffs = list
                .split(',')
                .map(|c| c.parse::<BigInt>().map_err(|_| format!("bad coefficient {c:?}")))
                .collect::<Result<Vec<_>, _>>()?;
            let expected = IntPolynomial::new(coeffs);
            let got = TransferMatrix::build(&a).char_poly().map_err(|e| e.to_string())?;
            expect_eq("g", &expected, &got)
        }
        "matrix" => {
            let a = set_arg(fields, 1)?;
            let expected = fields.get(2).ok_or("missing rows")?.to_string();
            let got = TransferMatrix::build(&a)
                .rows()
                .iter()
                .map(|r| r.iter().map(u8::to_string).collect::<String>())
                .collect::<Vec<_>>()
                .join("/");
            expect_eq("M_A", &expected, &got)
        }
        "pair" => {
            let a = set_arg(fields, 1)?;
            let reflected = set_arg(fields, 2)?;
            let (c, n) = (rational_arg(fields, 3)?, fields.get(4).ok_or("missing N")?);
            let (cr, nr) = (rational_arg(fields, 5)?, fields.get(6).ok_or("missing N")?);
            let p = compare_growth_pair_with(&a, 1, options).map_err(|e| e.to_string())?;
            let parts = [
                expect_eq("Ã", &reflected.braced(), &p.reflected.braced())?,
                expect_eq("c(A)", &c, &p.c)?,
                expect_eq("N", &n.to_string(), &to_decimal(&p.c, places_of(n)))?,
                expect_eq("c(Ã)", &cr, &p.c_reflected)?,
                expect_eq("N", &nr.to_string(), &to_decimal(&p.c_reflected, places_of(nr)))?,
                expect_eq("same g", &true, &p.charpoly_equal)?,
            ];
            Ok(parts.join(", "))
        }
        "bounds" => {
            let t: u64 = integer_arg(fields, 1)?;
            let k: u32 = integer_arg(fields, 2)?;
            let (lo, hi) = (fields.get(3).ok_or("missing lower")?, fields.get(4).ok_or("missing upper")?);
            let b = bounds_01t(t).map_err(|e| e.to_string())?;
            let parts = [
                expect_eq("k", &k, &b.k)?,
                expect_eq("lower", &lo.to_string(), &to_decimal(&b.lower, places_of(lo)))?,
                expect_eq("upper", &hi.to_string(), &to_decimal(&b.upper, places_of(hi)))?,
            ];
            Ok(parts.join(", "))
        }
        other => Err(format!("unknown record kind {other:?}")),
    }
}

// ---------------------------------------------------------------- oracle

fn named(cfg: &CliConfig) -> Vec<DigitSet> {
    NAMED_SETS
        .iter()
        .map(|s| DigitSet::parse_with_cap(s, cfg.max_digit_cap).expect("named alphabets are valid"))
        .collect()
}

fn oracle_checks(cfg: &CliConfig, opts: &VerifyOptions) -> Vec<Check> {
    let limit = opts.oracle_max.min(cfg.oracle_cap);
    named(cfg)
        .par_iter()
        .map(|a| {
            let mut ctx = CountingContext::new(a.clone());
            let mismatch = (0..=limit).find_map(|n| {
                let memo = ctx.count(n);
                match count_bruteforce_with_cap(a, n, cfg.oracle_cap) {
                    Ok(b) if BigUint::from(b) == memo => None,
                    Ok(b) => Some(format!("n = {n}: memo {memo}, brute force {b}")),
                    Err(e) => Some(e.to_string()),
                }
            });
            let name = format!("oracle {}", a.braced());
            match mismatch {
                None => Check::new(name, true, format!("memo = brute force for 0 <= n <= {limit}")),
                Some(d) => Check::new(name, false, d),
            }
        })
        .collect()
}

// ---------------------------------------------------------------- properties

fn fibonacci(count: usize) -> Vec<BigUint> {
    // fib[i] = F_i with F_0 = 0, F_1 = F_2 = 1
    let mut fib = vec![BigUint::from(0u32), BigUint::from(1u32)];
    while fib.len() < count {
        let next = &fib[fib.len() - 1] + &fib[fib.len() - 2];
        fib.push(next);
    }
    fib
}

fn per_set<F>(name: &str, sets: &[DigitSet], f: F) -> Check
where
    F: Fn(&DigitSet) -> Result<String, String> + Sync,
{
    let results: Vec<Result<String, String>> = sets.par_iter().map(&f).collect();
    let failures: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    if failures.is_empty() {
        Check::new(name, true, format!("{} alphabets", sets.len()))
    } else {
        Check::new(name, false, failures.join("; "))
    }
}

fn property_checks(cfg: &CliConfig, opts: &VerifyOptions) -> Vec<Check> {
    let sets = named(cfg);
    let odd_sets: Vec<DigitSet> = sets.iter().filter(|a| a.has_odd()).cloned().collect();
    let options = cfg.growth_options();
    let mut checks = vec![
        per_set("parity recurrences, l <= 2048", &sets, |a| {
            let mut ctx = CountingContext::new(a.clone());
            for l in 0i64..=2048 {
                let even: BigUint = a.evens().iter().map(|&b| ctx.count(l - b as i64)).sum();
                let odd: BigUint = a.odds().iter().map(|&c| ctx.count(l - c as i64)).sum();
                if ctx.count(2 * l) != even || ctx.count(2 * l + 1) != odd {
                    return Err(format!("{} fails at l = {l}", a.braced()));
                }
            }
            Ok(String::new())
        }),
        per_set("window step, k <= 12, m <= 3", &sets, |a| {
            let m = TransferMatrix::build(a);
            let mut ctx = CountingContext::new(a.clone());
            for mult in 1..=3 {
                for k in 0..=12 {
                    let w = ctx.omega(k, mult);
                    if m.step(&w).map_err(|e| e.to_string())? != ctx.omega(k + 1, mult) {
                        return Err(format!("{} fails at k = {k}, m = {mult}", a.braced()));
                    }
                }
            }
            Ok(String::new())
        }),
        per_set("g annihilates windows, r <= 8", &sets, |a| {
            let g = TransferMatrix::build(a).char_poly().map_err(|e| e.to_string())?;
            let mut ctx = CountingContext::new(a.clone());
            for mult in 1..=3 {
                for r in 0..=8u32 {
                    for j in 0..=a.max_digit() {
                        let total: BigInt = g
                            .coefficients()
                            .iter()
                            .enumerate()
                            .map(|(k, alpha)| {
                                let n = (BigInt::from(mult) << (r + k as u32)) - j;
                                alpha * BigInt::from(ctx.count(n))
                            })
                            .sum();
                        if total != BigInt::from(0) {
                            return Err(format!("{} r = {r} j = {j} m = {mult}: {total}", a.braced()));
                        }
                    }
                }
            }
            Ok(String::new())
        }),
        per_set("s(r) = |A| s(r-1) + h(r), r <= 20, m <= 3", &sets, |a| {
            let size = BigInt::from(a.cardinality());
            for mult in 1..=3 {
                let mut ctx = CountingContext::new(a.clone());
                let mut prev = BigInt::from(ctx.summatory(0, mult).map_err(|e| e.to_string())?);
                for r in 1..=20 {
                    let s = BigInt::from(ctx.summatory(r, mult).map_err(|e| e.to_string())?);
                    if s != &size * &prev + ctx.h_term(r, mult) {
                        return Err(format!("{} fails at r = {r}, m = {mult}", a.braced()));
                    }
                    prev = s;
                }
            }
            Ok(String::new())
        }),
        per_set("g annihilates h on the stability window", &odd_sets, |a| {
            let g = TransferMatrix::build(a).char_poly().map_err(|e| e.to_string())?;
            let mut ctx = CountingContext::new(a.clone());
            for mult in 1..=3 {
                let r0 = first_stable_r(a, mult);
                for r in r0..=r0 + 5 {
                    let total: BigInt = g
                        .coefficients()
                        .iter()
                        .enumerate()
                        .map(|(k, alpha)| alpha * ctx.h_term(r + k as u32, mult))
                        .sum();
                    if total != BigInt::from(0) {
                        return Err(format!("{} r = {r} m = {mult}: {total}", a.braced()));
                    }
                }
            }
            Ok(String::new())
        }),
        per_set("candidate c_r constant on [r0, r0+5]", &odd_sets, |a| {
            let r0 = first_stable_r(a, 1);
            let cands = candidates(a, 1, r0..=r0 + 5).map_err(|e| e.to_string())?;
            if cands.windows(2).all(|w| w[0].1 == w[1].1) {
                Ok(String::new())
            } else {
                Err(format!("{} candidates differ: {cands:?}", a.braced()))
            }
        }),
        per_set("row sums <= |A| - 1 and g(|A|) != 0", &odd_sets, |a| {
            let m = TransferMatrix::build(a);
            let report = m.row_sum_bound_check(a).map_err(|e| e.to_string())?;
            let g = m.char_poly().map_err(|e| e.to_string())?;
            let at_size = g.eval(&BigInt::from(a.cardinality()));
            if !report.holds || at_size == BigInt::from(0) {
                return Err(format!("{}: {report:?}, g(|A|) = {at_size}", a.braced()));
            }
            let sign = if m.dim().is_multiple_of(2) { 1 } else { -1 };
            if g.degree() != m.dim() || g.leading() != &BigInt::from(sign) {
                return Err(format!("{}: g has wrong shape {g}", a.braced()));
            }
            Ok(String::new())
        }),
    ];
    checks.push(Check::from_result("Fibonacci identities, k <= 25", fibonacci_identities()));
    checks.push(Check::from_result("standard binary gives f = 1", {
        let mut ctx = CountingContext::new(DigitSet::parse("0,1").unwrap());
        match (0..=4096u64).find(|&n| ctx.count(n) != BigUint::from(1u32)) {
            None => Ok("0 <= n <= 4096".into()),
            Some(n) => Err(format!("f({n}) != 1")),
        }
    }));
    checks.push(Check::from_result(
        "reflection on random alphabets",
        random_reflections(opts.reflection_samples, opts.seed),
    ));
    checks.push(Check::from_result("bounds contain c({0,1,t},1), 2 <= t <= 17", {
        let results: Vec<Result<(), String>> = (2..=17u64)
            .into_par_iter()
            .map(|t| {
                let c = growth_coefficient_with(&DigitSet::new([0, 1, t]).unwrap(), 1, &options)
                    .map_err(|e| e.to_string())?
                    .coefficient;
                let b = bounds_01t(t).map_err(|e| e.to_string())?;
                if b.lower <= c && c <= b.upper {
                    Ok(())
                } else {
                    Err(format!("t = {t}: {c} outside [{}, {}]", b.lower, b.upper))
                }
            })
            .collect();
        results.into_iter().collect::<Result<Vec<_>, _>>().map(|_| "16 values".into())
    }));
    checks.push(per_set("convergence s(r)/|A|^r -> c at r = 25", &table_sets(), |a| {
        let c = growth_coefficient_with(a, 1, &options).map_err(|e| e.to_string())?.coefficient;
        let trace = ratio_trace(a, 1, 25).map_err(|e| e.to_string())?;
        let err = |r: usize| {
            let d = &trace[r].1 - &c;
            if d < BigRational::from_integer(0.into()) { -d } else { d }
        };
        let tol = &c / BigRational::from_integer(1000.into());
        let (e15, e25) = (err(15), err(25));
        if e25 <= tol && e25 < e15 {
            Ok(String::new())
        } else if e25.is_zero() && e15.is_zero() {
            Err(format!("{}: ratio equals c exactly at r = 15 and r = 25, no strict decrease", a.braced()))
        } else {
            Err(format!("{}: error {} at r = 25, {} at r = 15", a.braced(), e25, e15))
        }
    }));
    checks.push(Check::from_result("c({0,1}, m) = m, m <= 10", {
        let a = DigitSet::parse("0,1").unwrap();
        (1..=10u64)
            .map(|m| {
                let c = growth_coefficient_with(&a, m, &options).map_err(|e| e.to_string())?.coefficient;
                if c == BigRational::from_integer(m.into()) {
                    Ok(())
                } else {
                    Err(format!("m = {m}: got {c}"))
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|_| "10 multipliers".into())
    }));
    checks
}

fn fibonacci_identities() -> Result<String, String> {
    let fib = fibonacci(30);
    let mut a = CountingContext::new(DigitSet::parse("0,1,3").unwrap());
    let mut b = CountingContext::new(DigitSet::parse("0,2,3").unwrap());
    for k in 0..=25u32 {
        let n: BigInt = (BigInt::from(1) << k) - 1;
        if a.count(n.clone()) != fib[k as usize + 1] {
            return Err(format!("f_{{0,1,3}}(2^{k} - 1) != F_{}", k + 1));
        }
        if k >= 1 && b.count(n.clone()) != fib[k as usize - 1] {
            return Err(format!("f_{{0,2,3}}(2^{k} - 1) != F_{}", k - 1));
        }
        if k >= 2 && b.count(n - 1) != fib[k as usize] {
            return Err(format!("f_{{0,2,3}}(2^{k} - 2) != F_{k}"));
        }
    }
    Ok("F_1 = F_2 = 1".into())
}

/// Alphabets containing 0 with largest digit at most 20.
pub fn random_alphabets(samples: usize, seed: u64) -> Vec<DigitSet> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let top = rng.gen_range(1..=20u64);
            let digits = std::iter::once(0)
                .chain(std::iter::once(top))
                .chain((1..top).filter(|_| rng.gen_bool(0.35)))
                .collect::<Vec<_>>();
            DigitSet::new(digits).expect("valid by construction")
        })
        .collect()
}

fn random_reflections(samples: usize, seed: u64) -> Result<String, String> {
    let sets = random_alphabets(samples, seed);
    let failures: Vec<String> = sets
        .par_iter()
        .filter_map(|a| match verify_reflection(a) {
            Ok(rep) if rep.passed() => None,
            Ok(rep) => Some(format!(
                "{}: mismatch {:?}, similar {}, same g {}",
                a.braced(),
                rep.entry_mismatch,
                rep.similar,
                rep.charpoly_equal()
            )),
            Err(e) => Some(e.to_string()),
        })
        .collect();
    match failures.first() {
        None => Ok(format!("{} alphabets, entry law + S-conjugation + same g", sets.len())),
        Some(f) => Err(f.clone()),
    }
}
