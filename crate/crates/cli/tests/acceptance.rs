//! Exit criteria, one `criterion N: PASS|FAIL` line each; exits 1 if any fails.

use std::process::Command;

use binrep_cli::{cmd_coeff, exit, CliConfig};
use binrep_core::asymptotics::{candidates, first_stable_r};
use binrep_core::{
    annihilated_sum, bounds_01t, count_bruteforce, growth_coefficient, parse_rational,
    ratio_trace, to_decimal, verify_reflection, CountingContext, DigitSet, IntPolynomial,
    TransferMatrix,
};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{rngs::StdRng, Rng, SeedableRng};

type Outcome = Result<String, String>;

fn report(n: u32, outcome: Outcome) -> Outcome {
    match &outcome {
        Ok(detail) => println!("criterion {n}: PASS {detail}"),
        Err(detail) => println!("criterion {n}: FAIL {detail}"),
    }
    outcome
}

fn set(s: &str) -> DigitSet {
    DigitSet::parse(s).unwrap()
}

fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

fn coeff(s: &str) -> BigRational {
    growth_coefficient(&set(s), 1).unwrap().coefficient
}

fn all_or_first_errors(errors: Vec<String>, ok: String) -> Outcome {
    if errors.is_empty() {
        Ok(ok)
    } else {
        Err(errors.join("; "))
    }
}

const TABLE_01T: [(u64, &str, &str); 16] = [
    (2, "1", "1.000"),
    (3, "4/5", "0.800"),
    (4, "5/8", "0.625"),
    (5, "14/25", "0.560"),
    (6, "35/71", "0.493"),
    (7, "176/391", "0.450"),
    (8, "137/338", "0.405"),
    (9, "1448/3775", "0.384"),
    (10, "1990/5527", "0.360"),
    (11, "3223/9476", "0.340"),
    (12, "2020/6283", "0.322"),
    (13, "47228/154123", "0.306"),
    (14, "35624/122411", "0.291"),
    (15, "699224/2501653", "0.280"),
    (16, "68281/256000", "0.267"),
    (17, "38132531/146988000", "0.259"),
];

const TABLE_PAIRS: [(&str, &str, &str, &str); 6] = [
    ("0,1,2,4", "0,2,3,4", "7/11", "3/11"),
    ("0,1,3,4", "0,1,3,4", "1/2", "1/2"),
    ("0,2,3,6", "0,3,4,6", "33/149", "21/149"),
    ("0,1,6,9", "0,3,8,9", "6345/28670", "2007/28670"),
    ("0,1,7,9", "0,2,8,9", "2069/10235", "1023/10235"),
    ("0,4,5,6,9", "0,3,4,5,9", "4044/83753", "6716/83753"),
];

const NAMED: [&str; 7] = ["0,1", "0,1,3", "0,2,3", "0,1,8", "0,1,3,4", "0,2,3,6", "0,4,5,6,9"];

fn table_alphabets() -> Vec<DigitSet> {
    let mut out: Vec<DigitSet> = TABLE_01T.iter().map(|(t, _, _)| set(&format!("0,1,{t}"))).collect();
    for (a, b, _, _) in TABLE_PAIRS {
        for s in [a, b] {
            let d = set(s);
            if !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

fn criterion_01_worked_examples() -> Outcome {
    let mut errors = Vec::new();
    let mut expect = |what: &str, got: String, want: &str| {
        if got != want {
            errors.push(format!("{what}: expected {want}, got {got}"));
        }
    };
    expect("c({0,1,8})", coeff("0,1,8").to_string(), "137/338");
    expect(
        "annihilated sum {0,1,8} at r = 3",
        annihilated_sum(&set("0,1,8"), 3, 1).unwrap().to_string(),
        "-59184",
    );
    let g = TransferMatrix::build(&set("0,1,8")).char_poly().unwrap();
    expect("g(3) for {0,1,8}", g.eval(&BigInt::from(3)).to_string(), "-5408");
    expect(
        "-59184 / (-5408 * 27)",
        BigRational::new((-59184).into(), (-5408 * 27).into()).to_string(),
        "137/338",
    );
    expect("c({0,1,3})", coeff("0,1,3").to_string(), "4/5");
    expect("c({0,2,3})", coeff("0,2,3").to_string(), "2/5");
    report(1, all_or_first_errors(errors, "137/338, -59184, -5408, 4/5, 2/5".into()))
}

fn criterion_02_family_table() -> Outcome {
    let mut errors = Vec::new();
    for (t, frac, dec) in TABLE_01T {
        let c = coeff(&format!("0,1,{t}"));
        if c != q(frac) {
            errors.push(format!("t = {t}: expected {frac}, got {c}"));
        }
        let rendered = to_decimal(&c, 3);
        if rendered != dec {
            errors.push(format!("t = {t}: expected decimal {dec}, got {rendered}"));
        }
    }
    report(2, all_or_first_errors(errors, "16 rationals and decimals".into()))
}

fn criterion_03_reflected_pairs() -> Outcome {
    let mut errors = Vec::new();
    for (a, b, ca, cb) in TABLE_PAIRS {
        assert_eq!(set(a).reflect(), set(b));
        for (s, want) in [(a, ca), (b, cb)] {
            let got = coeff(s);
            let want = q(want);
            // cross-multiplication, so unreduced listings compare by value
            if got.numer() * want.denom() != want.numer() * got.denom() {
                errors.push(format!("{{{s}}}: expected {want}, got {got}"));
            }
        }
    }
    report(3, all_or_first_errors(errors, "6 pairs".into()))
}

fn criterion_04_characteristic_polynomials() -> Outcome {
    let mut errors = Vec::new();
    let literal = [
        vec![1, 0, 1, 0, 0],
        vec![0, 1, 1, 0, 0],
        vec![0, 1, 0, 1, 0],
        vec![0, 0, 1, 1, 0],
        vec![0, 0, 1, 0, 1],
    ];
    let built = TransferMatrix::build(&set("0,1,3,4"));
    if built.rows() != literal {
        errors.push(format!("M for {{0,1,3,4}}: got {:?}", built.rows()));
    }
    let from_literal = TransferMatrix::from_rows(&literal).unwrap().char_poly().unwrap();
    // -(x - 2)(x - 1)^3(x + 1)
    let expected_0134 = IntPolynomial::from_i64(&[-2, 5, -2, -4, 4, -1]);
    for (what, got) in [("built", built.char_poly().unwrap()), ("literal", from_literal)] {
        if got != expected_0134 {
            errors.push(format!("{{0,1,3,4}} {what}: got {got}"));
        }
    }
    let g018 = TransferMatrix::build(&set("0,1,8")).char_poly().unwrap();
    if g018 != IntPolynomial::from_i64(&[1, -3, 3, -3, 6, -6, 3, -3, 3, -1]) {
        errors.push(format!("{{0,1,8}}: got {g018}"));
    }
    let x_minus_1 = IntPolynomial::from_i64(&[-1, 1]);
    let golden = IntPolynomial::from_i64(&[-1, -1, 1]);
    let target = x_minus_1.mul(&x_minus_1).mul(&golden);
    for s in ["0,1,3", "0,2,3"] {
        let g = TransferMatrix::build(&set(s)).char_poly().unwrap();
        if g != target {
            errors.push(format!("{{{s}}}: expected {target}, got {g}"));
        }
    }
    report(4, all_or_first_errors(errors, "{0,1,3,4}, {0,1,8}, {0,1,3}, {0,2,3}".into()))
}

fn criterion_05_oracle_equivalence() -> Outcome {
    let mut errors = Vec::new();
    for s in NAMED {
        let a = set(s);
        let mut ctx = CountingContext::new(a.clone());
        if let Some(n) =
            (0..=4096u64).find(|&n| ctx.count(n) != BigUint::from(count_bruteforce(&a, n).unwrap()))
        {
            errors.push(format!("{{{s}}} differs at n = {n}"));
        }
    }
    report(5, all_or_first_errors(errors, "7 alphabets, 0 <= n <= 4096".into()))
}

fn criterion_06_matrix_step_and_annihilation() -> Outcome {
    let mut errors = Vec::new();
    for s in NAMED {
        let a = set(s);
        let mat = TransferMatrix::build(&a);
        let g = mat.char_poly().unwrap();
        let mut ctx = CountingContext::new(a.clone());
        for m in 1..=3u64 {
            for k in 0..=12 {
                if mat.step(&ctx.omega(k, m)).unwrap() != ctx.omega(k + 1, m) {
                    errors.push(format!("{{{s}}}: step fails at k = {k}, m = {m}"));
                }
            }
            for r in 0..=8usize {
                for j in 0..=a.max_digit() as i64 {
                    let total: BigInt = g
                        .coefficients()
                        .iter()
                        .enumerate()
                        .map(|(k, alpha)| alpha * BigInt::from(ctx.count((BigInt::from(m) << (r + k)) - j)))
                        .sum();
                    if !total.is_zero() {
                        errors.push(format!("{{{s}}}: r = {r}, j = {j}, m = {m} gives {total}"));
                    }
                }
            }
        }
    }
    report(6, all_or_first_errors(errors, "k <= 12, r <= 8, m in 1..=3".into()))
}

fn criterion_07_summatory_recurrence() -> Outcome {
    let mut errors = Vec::new();
    for s in NAMED {
        let a = set(s);
        let size = BigInt::from(a.cardinality());
        let mut ctx = CountingContext::new(a.clone());
        for m in 1..=3u64 {
            let mut prev = BigInt::from(ctx.summatory(0, m).unwrap());
            for r in 1..=20 {
                let cur = BigInt::from(ctx.summatory(r, m).unwrap());
                if cur != &size * &prev + ctx.h_term(r, m) {
                    errors.push(format!("{{{s}}}: s/h recurrence fails at r = {r}, m = {m}"));
                }
                prev = cur;
            }
        }
        if !a.has_odd() {
            continue;
        }
        let g = TransferMatrix::build(&a).char_poly().unwrap();
        let r0 = first_stable_r(&a, 1);
        for r in r0..=r0 + 5 {
            let total: BigInt = g
                .coefficients()
                .iter()
                .enumerate()
                .map(|(k, alpha)| alpha * ctx.h_term(r + k as u32, 1))
                .sum();
            if !total.is_zero() {
                errors.push(format!("{{{s}}}: h not annihilated at r = {r}"));
            }
        }
        let cs = candidates(&a, 1, r0..=r0 + 5).unwrap();
        if cs.windows(2).any(|w| w[0].1 != w[1].1) {
            errors.push(format!("{{{s}}}: candidates vary on [{r0}, {}]", r0 + 5));
        }
    }
    report(7, all_or_first_errors(errors, "r <= 20, m in 1..=3".into()))
}

fn fibonacci(n: usize) -> Vec<BigUint> {
    let mut f = vec![BigUint::zero(), BigUint::from(1u32)];
    while f.len() <= n {
        let next = &f[f.len() - 1] + &f[f.len() - 2];
        f.push(next);
    }
    f
}

fn criterion_08_fibonacci() -> Outcome {
    let fib = fibonacci(30);
    let mut errors = Vec::new();
    let mut a = CountingContext::new(set("0,1,3"));
    let mut b = CountingContext::new(set("0,2,3"));
    for k in 0..=25usize {
        let n: BigInt = (BigInt::from(1) << k) - 1;
        if a.count(n.clone()) != fib[k + 1] {
            errors.push(format!("f_{{0,1,3}}(2^{k} - 1)"));
        }
        if k >= 1 && b.count(n.clone()) != fib[k - 1] {
            errors.push(format!("f_{{0,2,3}}(2^{k} - 1)"));
        }
        if k >= 2 && b.count(n - 1) != fib[k] {
            errors.push(format!("f_{{0,2,3}}(2^{k} - 2)"));
        }
    }
    report(8, all_or_first_errors(errors, "k <= 25".into()))
}

fn criterion_09_convergence() -> Outcome {
    let mut errors = Vec::new();
    let sets = table_alphabets();
    for a in &sets {
        let c = growth_coefficient(a, 1).unwrap().coefficient;
        let trace = ratio_trace(a, 1, 25).unwrap();
        let err = |r: usize| (&trace[r].1 - &c).abs();
        let tol = &c / BigInt::from(1000);
        if err(25) > tol {
            errors.push(format!("{}: error {} above 1e-3 c", a.braced(), to_decimal(&err(25), 9)));
        }
        if err(25) >= err(15) {
            errors.push(format!(
                "{}: error at r = 25 ({}) not below error at r = 15 ({})",
                a.braced(),
                err(25),
                err(15)
            ));
        }
    }
    report(9, all_or_first_errors(errors, format!("{} alphabets", sets.len())))
}

fn criterion_10_bounds() -> Outcome {
    let mut errors = Vec::new();
    for (t, frac, _) in TABLE_01T {
        let b = bounds_01t(t).unwrap();
        let c = q(frac);
        if !(b.lower <= c && c <= b.upper) {
            errors.push(format!("t = {t}: {frac} outside [{}, {}]", b.lower, b.upper));
        }
        let computed = coeff(&format!("0,1,{t}"));
        if !(b.lower <= computed && computed <= b.upper) {
            errors.push(format!("t = {t}: computed {computed} outside bounds"));
        }
        if (9..=15).contains(&t) {
            let shown = (to_decimal(&b.lower, 3), to_decimal(&b.upper, 3));
            if shown != ("0.132".into(), "0.593".into()) {
                errors.push(format!("t = {t}: bounds render as {shown:?}"));
            }
        }
    }
    report(10, all_or_first_errors(errors, "2 <= t <= 17".into()))
}

fn criterion_11_reflection() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x7ab1e);
    let mut sets: Vec<DigitSet> = TABLE_PAIRS.iter().map(|(a, _, _, _)| set(a)).collect();
    while sets.len() < 6 + 200 {
        let top = rng.gen_range(1..=20u64);
        let digits = (1..top).filter(|_| rng.gen_bool(0.3)).chain([0, top]);
        sets.push(DigitSet::new(digits).unwrap());
    }
    let errors: Vec<String> = sets
        .iter()
        .filter_map(|a| {
            let rep = verify_reflection(a).unwrap();
            (!rep.passed()).then(|| {
                format!(
                    "{}: entries {:?}, similar {}, charpoly equal {}",
                    a.braced(),
                    rep.entry_mismatch,
                    rep.similar,
                    rep.charpoly_equal()
                )
            })
        })
        .collect();
    report(11, all_or_first_errors(errors, format!("{} alphabets", sets.len())))
}

fn binrep(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_binrep")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn criterion_12_negative_controls() -> Outcome {
    let mut errors = Vec::new();
    match cmd_coeff(&CliConfig::default(), "0,2,4", 1) {
        Err(e) if e.code == exit::HYPOTHESIS => {}
        other => errors.push(format!("cmd_coeff {{0,2,4}}: {other:?}")),
    }
    let (code, _) = binrep(&["coeff", "0,2,4"]);
    if code != 3 {
        errors.push(format!("binrep coeff 0,2,4 exited {code}"));
    }

    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.tsv");
    let bad = dir.path().join("bad.tsv");
    let rows = "coeff 0,1,8 137/338 0.405\nannihilated 0,1,8 3 -59184\npair 0,1,6,9 0,3,8,9 6345/28670 0.221 2007/28670 0.070\n";
    std::fs::write(&good, rows).unwrap();
    std::fs::write(&bad, rows.replace("137/338", "137/339")).unwrap();
    let (code, out) = binrep(&["verify", "--suite", "paper", "--fixture", good.to_str().unwrap()]);
    if code != 0 {
        errors.push(format!("clean fixture exited {code}: {out}"));
    }
    let (code, out) = binrep(&["verify", "--suite", "paper", "--fixture", bad.to_str().unwrap()]);
    if code != 1 || !out.contains("FAIL") {
        errors.push(format!("corrupted fixture exited {code}: {out}"));
    }
    report(12, all_or_first_errors(errors, "exit 3 on {0,2,4}, exit 1 on corrupted fixture".into()))
}

fn main() {
    let criteria: [fn() -> Outcome; 12] = [
        criterion_01_worked_examples,
        criterion_02_family_table,
        criterion_03_reflected_pairs,
        criterion_04_characteristic_polynomials,
        criterion_05_oracle_equivalence,
        criterion_06_matrix_step_and_annihilation,
        criterion_07_summatory_recurrence,
        criterion_08_fibonacci,
        criterion_09_convergence,
        criterion_10_bounds,
        criterion_11_reflection,
        criterion_12_negative_controls,
    ];
    let mut failed = Vec::new();
    for (i, run) in criteria.iter().enumerate() {
        let n = i as u32 + 1;
        let ok = match std::panic::catch_unwind(run) {
            Ok(outcome) => outcome.is_ok(),
            Err(_) => report(n, Err("panicked".into())).is_ok(),
        };
        if !ok {
            failed.push(n);
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
