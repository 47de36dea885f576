use std::path::PathBuf;
use std::process::ExitCode;

use binrep_cli::verify::{cmd_verify, Suite};
use binrep_cli::{
    cmd_bounds, cmd_charpoly, cmd_coeff, cmd_count, cmd_matrix, cmd_pair, cmd_ratio, cmd_reflect,
    cmd_sum, cmd_table, exit, CliConfig, CliError, OutputFormat, TableSource,
};
use clap::{Args, Parser, Subcommand};

/// Non-standard binary representations: counts, transfer matrices and
/// exact growth coefficients.
#[derive(Parser)]
#[command(name = "binrep", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Directory holding per-alphabet memo files (`n<TAB>count`).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Largest digit accepted in an alphabet.
    #[arg(long, global = true, default_value_t = 64)]
    max_digit: u64,
    /// Largest n accepted by the brute-force counter.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    oracle_cap: u64,
    /// Largest number of terms a direct block sum may add.
    #[arg(long, global = true, default_value_t = 1 << 26)]
    budget: u64,
    /// Decimal places in rendered approximations.
    #[arg(long, global = true, default_value_t = 3)]
    decimal_places: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Print f_A(n).
    Count {
        set: String,
        n: String,
        /// Enumerate digit strings instead of using the recurrence.
        #[arg(long)]
        bruteforce: bool,
    },
    /// Print the block sum s_A(r, m) by direct summation.
    Sum {
        set: String,
        r: u32,
        #[arg(long, default_value_t = 1)]
        m: u64,
    },
    /// Print the growth coefficient c(A, m).
    Coeff {
        set: String,
        #[arg(long, default_value_t = 1)]
        m: u64,
        /// Give up if no three consecutive candidates agree by this r.
        #[arg(long, default_value_t = 40)]
        r_max: u32,
    },
    /// Tabulate c(A, m) for the {0,1,t} family or for sets listed in a file.
    Table {
        #[arg(long, value_parser = ["01t"], conflicts_with = "sets")]
        family: Option<String>,
        #[arg(long, default_value_t = 2)]
        t_min: u64,
        #[arg(long, default_value_t = 17)]
        t_max: u64,
        /// File with one set per line; rows are paired with reflections.
        #[arg(long)]
        sets: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = 40)]
        r_max: u32,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Published-values fixture to use instead of the built-in one.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Print the transfer matrix M_A.
    Matrix { set: String },
    /// Print det(M_A - xI), coefficients constant term first.
    Charpoly { set: String },
    /// Print the reflected set {a_z - a}.
    Reflect { set: String },
    /// Print c(A, m) next to c(Ã, m).
    Pair {
        set: String,
        #[arg(long, default_value_t = 1)]
        m: u64,
    },
    /// Print the bounds on c({0,1,t}, 1).
    Bounds { t: u64 },
    /// Print s_A(r, m) / |A|^r for r = 0..=r_max.
    Ratio {
        set: String,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = 25)]
        r_max: u32,
    },
}

fn run(cli: Cli) -> Result<(String, i32), CliError> {
    let g = cli.global;
    let mut cfg = CliConfig {
        output_format: g.format,
        cache_path: g.cache,
        max_digit_cap: g.max_digit,
        oracle_cap: g.oracle_cap,
        summation_budget: g.budget,
        decimal_places: g.decimal_places,
        ..CliConfig::default()
    };
    cfg.validate()?;
    let ok = |out: String| Ok((out, exit::SUCCESS));
    match cli.command {
        Command::Count { set, n, bruteforce } => ok(cmd_count(&cfg, &set, &n, bruteforce)?),
        Command::Sum { set, r, m } => ok(cmd_sum(&cfg, &set, r, m)?),
        Command::Coeff { set, m, r_max } => {
            cfg.r_max = r_max;
            cfg.validate()?;
            ok(cmd_coeff(&cfg, &set, m)?)
        }
        Command::Table { family, t_min, t_max, sets, m, r_max } => {
            cfg.r_max = r_max;
            cfg.validate()?;
            let source = match (family, sets) {
                (_, Some(path)) => TableSource::Sets(
                    std::fs::read_to_string(&path)
                        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?,
                ),
                _ => TableSource::Family01t { t_min, t_max },
            };
            ok(cmd_table(&cfg, &source, m)?)
        }
        Command::Verify { suite, fixture } => cmd_verify(&cfg, suite, fixture.as_deref()),
        Command::Matrix { set } => ok(cmd_matrix(&cfg, &set)?),
        Command::Charpoly { set } => ok(cmd_charpoly(&cfg, &set)?),
        Command::Reflect { set } => ok(cmd_reflect(&cfg, &set)?),
        Command::Pair { set, m } => ok(cmd_pair(&cfg, &set, m)?),
        Command::Bounds { t } => ok(cmd_bounds(&cfg, t)?),
        Command::Ratio { set, m, r_max } => ok(cmd_ratio(&cfg, &set, m, r_max)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
