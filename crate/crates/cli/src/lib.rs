//! Command implementations behind the `binrep` binary.
//!
//! Each command returns its full output as a string so the binary only has
//! to print it and pick an exit code.

use std::fmt;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use binrep_core::{
    bounds_01t, compare_growth_pair_with, count_bruteforce_with_cap, growth_coefficient_with,
    ratio_trace, to_decimal, CountingContext, DigitSet, Error, GrowthOptions, GrowthReport,
    TransferMatrix,
};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

pub mod verify;

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const HYPOTHESIS: i32 = 3;
    pub const INTERNAL: i32 = 4;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliConfig {
    pub output_format: OutputFormat,
    pub cache_path: Option<PathBuf>,
    pub max_digit_cap: u64,
    pub oracle_cap: u64,
    pub summation_budget: u64,
    pub r_max: u32,
    pub decimal_places: usize,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            output_format: OutputFormat::Text,
            cache_path: None,
            max_digit_cap: binrep_core::digit_set::DEFAULT_MAX_DIGIT,
            oracle_cap: binrep_core::counting::DEFAULT_ORACLE_CAP,
            summation_budget: binrep_core::counting::DEFAULT_SUMMATION_BUDGET,
            r_max: binrep_core::asymptotics::DEFAULT_R_MAX,
            decimal_places: binrep_core::asymptotics::DEFAULT_DECIMAL_PLACES,
        }
    }
}

impl CliConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let limits = [
            ("max digit cap", self.max_digit_cap),
            ("oracle cap", self.oracle_cap),
            ("summation budget", self.summation_budget),
            ("r max", self.r_max as u64),
            ("decimal places", self.decimal_places as u64),
        ];
        match limits.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(CliError::input(format!("{name} must be positive"))),
            None => Ok(()),
        }
    }

    pub fn parse_set(&self, text: &str) -> Result<DigitSet, CliError> {
        Ok(DigitSet::parse_with_cap(text, self.max_digit_cap)?)
    }

    pub fn growth_options(&self) -> GrowthOptions {
        GrowthOptions {
            r_max: self.r_max,
            decimal_places: self.decimal_places,
            summation_budget: self.summation_budget,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: exit::INPUT, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OddElementRequired { .. } => exit::HYPOTHESIS,
            Error::StabilityFailure { .. }
            | Error::BudgetExceeded { .. }
            | Error::InternalExactnessFailure { .. } => exit::INTERNAL,
            _ => exit::INPUT,
        };
        CliError { code, message: e.to_string() }
    }
}

pub type CliResult = Result<String, CliError>;

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("value serializes") + "\n"
}

fn csv_table<S: AsRef<str>>(header: &[&str], rows: &[Vec<S>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(AsRef::as_ref)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

fn cache_file(dir: &Path, set: &DigitSet) -> PathBuf {
    dir.join(format!("{}.tsv", set.key()))
}

fn load_cache(cfg: &CliConfig, ctx: &mut CountingContext) -> Result<(), CliError> {
    if let Some(dir) = &cfg.cache_path {
        let path = cache_file(dir, ctx.alphabet());
        if path.exists() {
            let file = fs::File::open(&path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            ctx.load_memo(BufReader::new(file))?;
        }
    }
    Ok(())
}

fn save_cache(cfg: &CliConfig, ctx: &CountingContext) -> Result<(), CliError> {
    if let Some(dir) = &cfg.cache_path {
        fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
        let path = cache_file(dir, ctx.alphabet());
        let file = fs::File::create(&path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        ctx.write_memo(std::io::BufWriter::new(file))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CountRecord {
    set: String,
    n: String,
    count: String,
}

/// `f_A(n)`, by the memoized recurrence or by brute-force enumeration.
pub fn cmd_count(cfg: &CliConfig, set: &str, n: &str, bruteforce: bool) -> CliResult {
    let alphabet = cfg.parse_set(set)?;
    let n: BigUint = n
        .trim()
        .parse()
        .map_err(|_| CliError::input(format!("n must be a non-negative integer, got {n:?}")))?;
    let count = if bruteforce {
        let small = u64::try_from(&n)
            .map_err(|_| Error::OracleCapExceeded { n: u64::MAX, cap: cfg.oracle_cap })?;
        BigUint::from(count_bruteforce_with_cap(&alphabet, small, cfg.oracle_cap)?)
    } else {
        let mut ctx = CountingContext::new(alphabet.clone()).with_budget(cfg.summation_budget);
        load_cache(cfg, &mut ctx)?;
        let count = ctx.count(n.clone());
        save_cache(cfg, &ctx)?;
        count
    };
    Ok(match cfg.output_format {
        OutputFormat::Text => format!("{count}\n"),
        OutputFormat::Json => json(&CountRecord {
            set: alphabet.to_string(),
            n: n.to_string(),
            count: count.to_string(),
        }),
        OutputFormat::Csv => csv_table(
            &["set", "n", "count"],
            &[vec![alphabet.to_string(), n.to_string(), count.to_string()]],
        ),
    })
}

/// `s_A(r, m)` by direct summation.
pub fn cmd_sum(cfg: &CliConfig, set: &str, r: u32, m: u64) -> CliResult {
    let alphabet = cfg.parse_set(set)?;
    let mut ctx = CountingContext::new(alphabet).with_budget(cfg.summation_budget);
    load_cache(cfg, &mut ctx)?;
    let total = ctx.summatory(r, m)?;
    save_cache(cfg, &ctx)?;
    Ok(format!("{total}\n"))
}

const REPORT_HEADER: [&str; 5] = ["set", "m", "c", "decimal", "r_used"];

fn report_row(report: &GrowthReport) -> Vec<String> {
    vec![
        report.alphabet.to_string(),
        report.multiplier.to_string(),
        report.coefficient.to_string(),
        report.decimal.clone(),
        report.r_used.to_string(),
    ]
}

pub fn cmd_coeff(cfg: &CliConfig, set: &str, m: u64) -> CliResult {
    if m == 0 {
        return Err(CliError::input("m must be at least 1"));
    }
    let alphabet = cfg.parse_set(set)?;
    let report = growth_coefficient_with(&alphabet, m, &cfg.growth_options())?;
    Ok(match cfg.output_format {
        OutputFormat::Text => format!("{}\n", report.summary()),
        OutputFormat::Json => report.to_json() + "\n",
        OutputFormat::Csv => csv_table(&REPORT_HEADER, &[report_row(&report)]),
    })
}

pub enum TableSource {
    /// `{0,1,t}` for `t_min <= t <= t_max`.
    Family01t { t_min: u64, t_max: u64 },
    /// One set per line; each row is paired with its reflection.
    Sets(String),
}

pub fn cmd_table(cfg: &CliConfig, source: &TableSource, m: u64) -> CliResult {
    if m == 0 {
        return Err(CliError::input("m must be at least 1"));
    }
    match source {
        TableSource::Family01t { t_min, t_max } => family_table(cfg, *t_min, *t_max, m),
        TableSource::Sets(text) => {
            let sets = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| cfg.parse_set(l))
                .collect::<Result<Vec<_>, _>>()?;
            paired_table(cfg, &sets, m)
        }
    }
}

fn family_table(cfg: &CliConfig, t_min: u64, t_max: u64, m: u64) -> CliResult {
    if t_min < 2 || t_max < t_min {
        return Err(CliError::input(format!(
            "need 2 <= t-min <= t-max, got t-min = {t_min}, t-max = {t_max}"
        )));
    }
    let sets = (t_min..=t_max)
        .map(|t| Ok(DigitSet::with_cap([0, 1, t], cfg.max_digit_cap)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let options = cfg.growth_options();
    let reports = sets
        .par_iter()
        .map(|a| growth_coefficient_with(a, m, &options))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match cfg.output_format {
        OutputFormat::Text => {
            let mut out = format!("{:<12} {:<22} {}\n", "A", format!("c(A,{m})"), "N");
            for r in &reports {
                out += &format!(
                    "{:<12} {:<22} {}\n",
                    r.alphabet.braced(),
                    r.coefficient.to_string(),
                    r.decimal
                );
            }
            out
        }
        OutputFormat::Json => json(&reports.iter().map(GrowthReport::record).collect::<Vec<_>>()),
        OutputFormat::Csv => {
            csv_table(&REPORT_HEADER, &reports.iter().map(report_row).collect::<Vec<_>>())
        }
    })
}

#[derive(Serialize)]
struct PairRow {
    set: String,
    c: String,
    decimal: String,
    reflected: String,
    c_reflected: String,
    decimal_reflected: String,
    charpoly_equal: bool,
}

fn paired_table(cfg: &CliConfig, sets: &[DigitSet], m: u64) -> CliResult {
    let options = cfg.growth_options();
    let places = cfg.decimal_places;
    let rows = sets
        .par_iter()
        .map(|a| {
            let p = compare_growth_pair_with(a, m, &options)?;
            Ok(PairRow {
                set: p.alphabet.to_string(),
                decimal: to_decimal(&p.c, places),
                c: p.c.to_string(),
                reflected: p.reflected.to_string(),
                decimal_reflected: to_decimal(&p.c_reflected, places),
                c_reflected: p.c_reflected.to_string(),
                charpoly_equal: p.charpoly_equal,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(match cfg.output_format {
        OutputFormat::Text => {
            let mut out = format!(
                "{:<14} {:<14} {:<7} | {:<14} {:<14} {}\n",
                "A",
                format!("c(A,{m})"),
                "N",
                "Ã",
                format!("c(Ã,{m})"),
                "N"
            );
            for r in &rows {
                out += &format!(
                    "{:<14} {:<14} {:<7} | {:<14} {:<14} {}\n",
                    format!("{{{}}}", r.set),
                    r.c,
                    r.decimal,
                    format!("{{{}}}", r.reflected),
                    r.c_reflected,
                    r.decimal_reflected
                );
            }
            out
        }
        OutputFormat::Json => json(&rows),
        OutputFormat::Csv => csv_table(
            &["set", "c", "decimal", "reflected", "c_reflected", "decimal_reflected", "charpoly_equal"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.set.clone(),
                        r.c.clone(),
                        r.decimal.clone(),
                        r.reflected.clone(),
                        r.c_reflected.clone(),
                        r.decimal_reflected.clone(),
                        r.charpoly_equal.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    })
}

pub fn cmd_pair(cfg: &CliConfig, set: &str, m: u64) -> CliResult {
    if m == 0 {
        return Err(CliError::input("m must be at least 1"));
    }
    let alphabet = cfg.parse_set(set)?;
    if cfg.output_format == OutputFormat::Json {
        let p = compare_growth_pair_with(&alphabet, m, &cfg.growth_options())?;
        return Ok(p.to_json() + "\n");
    }
    paired_table(cfg, &[alphabet], m)
}

pub fn cmd_matrix(cfg: &CliConfig, set: &str) -> CliResult {
    let alphabet = cfg.parse_set(set)?;
    let m = TransferMatrix::build(&alphabet);
    Ok(match cfg.output_format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct MatrixRecord {
                set: String,
                rows: Vec<Vec<u8>>,
            }
            json(&MatrixRecord { set: alphabet.to_string(), rows: m.rows() })
        }
        _ => m.to_string(),
    })
}

pub fn cmd_charpoly(cfg: &CliConfig, set: &str) -> CliResult {
    let alphabet = cfg.parse_set(set)?;
    let g = TransferMatrix::build(&alphabet).char_poly()?;
    Ok(match cfg.output_format {
        OutputFormat::Text => format!("{}\n{}\n", g.coefficient_list(), g),
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct PolyRecord {
                set: String,
                coefficients: Vec<String>,
                poly: String,
            }
            json(&PolyRecord {
                set: alphabet.to_string(),
                coefficients: g.coefficients().iter().map(ToString::to_string).collect(),
                poly: g.to_string(),
            })
        }
        OutputFormat::Csv => csv_table(
            &["set", "coefficients", "poly"],
            &[vec![alphabet.to_string(), g.coefficient_list(), g.to_string()]],
        ),
    })
}

pub fn cmd_reflect(cfg: &CliConfig, set: &str) -> CliResult {
    let alphabet = cfg.parse_set(set)?;
    Ok(format!("{}\n", alphabet.reflect()))
}

pub fn cmd_bounds(cfg: &CliConfig, t: u64) -> CliResult {
    let b = bounds_01t(t)?;
    let places = cfg.decimal_places;
    Ok(match cfg.output_format {
        OutputFormat::Text => format!(
            "k = {}: {} <= c({{0,1,{}}},1) <= {} (≈ {} <= c <= {})\n",
            b.k,
            b.lower,
            t,
            b.upper,
            to_decimal(&b.lower, places),
            to_decimal(&b.upper, places)
        ),
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct BoundsRecord {
                t: u64,
                k: u32,
                lower: String,
                upper: String,
            }
            json(&BoundsRecord {
                t,
                k: b.k,
                lower: b.lower.to_string(),
                upper: b.upper.to_string(),
            })
        }
        OutputFormat::Csv => csv_table(
            &["t", "k", "lower", "upper"],
            &[vec![t.to_string(), b.k.to_string(), b.lower.to_string(), b.upper.to_string()]],
        ),
    })
}

pub fn cmd_ratio(cfg: &CliConfig, set: &str, m: u64, r_max: u32) -> CliResult {
    if m == 0 {
        return Err(CliError::input("m must be at least 1"));
    }
    let alphabet = cfg.parse_set(set)?;
    let trace = ratio_trace(&alphabet, m, r_max)?;
    let places = cfg.decimal_places;
    let rows: Vec<Vec<String>> = trace
        .iter()
        .map(|(r, q)| vec![r.to_string(), q.to_string(), to_decimal(q, places)])
        .collect();
    Ok(match cfg.output_format {
        OutputFormat::Text => rows.iter().map(|r| r.join("\t") + "\n").collect(),
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct RatioRecord {
                set: String,
                m: u64,
                ratios: Vec<(u32, String)>,
            }
            json(&RatioRecord {
                set: alphabet.to_string(),
                m,
                ratios: trace.iter().map(|(r, q)| (*r, q.to_string())).collect(),
            })
        }
        OutputFormat::Csv => csv_table(&["r", "ratio", "decimal"], &rows),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> CliConfig {
        CliConfig::default()
    }

    fn with_format(format: OutputFormat) -> CliConfig {
        CliConfig { output_format: format, ..CliConfig::default() }
    }

    #[test]
    fn count_outputs() {
        assert_eq!(cmd_count(&cfg(), "0,1,3", "7", false).unwrap(), "3\n");
        assert_eq!(cmd_count(&cfg(), "0,1,3", "7", true).unwrap(), "3\n");
        assert_eq!(cmd_count(&cfg(), "0,1", "1000000", false).unwrap(), "1\n");
        let err = cmd_count(&cfg(), "1,3", "5", false).unwrap_err();
        assert_eq!(err.code, exit::INPUT);
        assert!(err.message.contains("digit set must contain 0"));
        assert_eq!(cmd_count(&cfg(), "0,1", "-4", false).unwrap_err().code, exit::INPUT);
        assert_eq!(cmd_count(&cfg(), "0,1", "2000000", true).unwrap_err().code, exit::INPUT);
        assert_eq!(
            cmd_count(&with_format(OutputFormat::Json), "0,1,8", "8", false).unwrap(),
            "{\"set\":\"0,1,8\",\"n\":\"8\",\"count\":\"2\"}\n"
        );
    }

    #[test]
    fn coeff_outputs() {
        assert!(cmd_coeff(&cfg(), "0,1,8", 1).unwrap().starts_with("c = 137/338 (≈ 0.405)"));
        assert!(cmd_coeff(&cfg(), "0,1", 7).unwrap().starts_with("c = 7 (≈ 7.000)"));
        let err = cmd_coeff(&cfg(), "0,2,4", 1).unwrap_err();
        assert_eq!(err.code, exit::HYPOTHESIS);
        assert!(err.message.starts_with("growth coefficient undefined: no odd element"));
        let tight = CliConfig { r_max: 2, ..cfg() };
        assert_eq!(cmd_coeff(&tight, "0,1,8", 1).unwrap_err().code, exit::INTERNAL);
        let csv = cmd_coeff(&with_format(OutputFormat::Csv), "0,1,8", 1).unwrap();
        assert_eq!(csv, "set,m,c,decimal,r_used\n\"0,1,8\",1,137/338,0.405,4\n");
    }

    #[test]
    fn tables() {
        let single = cmd_table(&cfg(), &TableSource::Family01t { t_min: 5, t_max: 5 }, 1).unwrap();
        let lines: Vec<&str> = single.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].contains("{0,1,5}") && lines[1].contains("14/25") && lines[1].contains("0.560"));
        let paired = cmd_table(&cfg(), &TableSource::Sets("# pairs\n0,1,2,4\n\n".into()), 1).unwrap();
        assert!(paired.contains("{0,2,3,4}") && paired.contains("7/11") && paired.contains("3/11"));
        assert_eq!(
            cmd_table(&cfg(), &TableSource::Family01t { t_min: 1, t_max: 4 }, 1).unwrap_err().code,
            exit::INPUT
        );
        assert_eq!(cmd_table(&cfg(), &TableSource::Sets("0,2,4".into()), 1).unwrap_err().code, exit::HYPOTHESIS);
    }

    #[test]
    fn thin_wrappers() {
        assert_eq!(cmd_reflect(&cfg(), "0,1,3").unwrap(), "0,2,3\n");
        assert_eq!(cmd_matrix(&cfg(), "0,1").unwrap(), "1 0\n0 1\n");
        assert_eq!(cmd_charpoly(&cfg(), "0,1,3").unwrap(), "-1,1,2,-3,1\nx^4 - 3x^3 + 2x^2 + x - 1\n");
        assert!(cmd_bounds(&cfg(), 12).unwrap().contains("≈ 0.132 <= c <= 0.593"));
        assert_eq!(cmd_bounds(&cfg(), 1).unwrap_err().code, exit::INPUT);
        let ratios = cmd_ratio(&cfg(), "0,1,3", 1, 2).unwrap();
        assert_eq!(ratios, "0\t1\t1.000\n1\t1\t1.000\n2\t8/9\t0.889\n");
        assert_eq!(cmd_sum(&cfg(), "0,1,3", 2, 1).unwrap(), "8\n");
        assert!(cmd_pair(&with_format(OutputFormat::Json), "0,1,3", 1).unwrap().contains("\"c_reflected\":\"2/5\""));
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        let bad = CliConfig { decimal_places: 0, ..cfg() };
        assert_eq!(bad.validate().unwrap_err().code, exit::INPUT);
        let capped = CliConfig { max_digit_cap: 5, ..cfg() };
        assert_eq!(cmd_reflect(&capped, "0,1,8").unwrap_err().code, exit::INPUT);
    }

    #[test]
    fn cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = CliConfig { cache_path: Some(dir.path().join("memo")), ..cfg() };
        assert_eq!(cmd_count(&cfg, "0,1,8", "5000", false).unwrap(), cmd_count(&CliConfig::default(), "0,1,8", "5000", false).unwrap());
        let file = dir.path().join("memo").join("0_1_8.tsv");
        let text = fs::read_to_string(&file).unwrap();
        assert!(text.lines().any(|l| l.starts_with("5000\t")));
        // a loaded cache is trusted as-is
        fs::write(&file, "5000\t99\n").unwrap();
        assert_eq!(cmd_count(&cfg, "0,1,8", "5000", false).unwrap(), "99\n");
        fs::write(&file, "garbage\n").unwrap();
        assert_eq!(cmd_count(&cfg, "0,1,8", "5000", false).unwrap_err().code, exit::INPUT);
    }
}
