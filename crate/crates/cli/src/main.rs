//! Command-line driver: expansion, counting, dimension/pole solves, and the
//! empirical verification battery. Outputs are deterministic: identical
//! configurations produce byte-identical files regardless of thread count.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use zaremba_core::asymptotics::{dyadic_grid, fit_exponent, smoothing_experiment};
use zaremba_core::cf::{cf_expand, reconstruct};
use zaremba_core::counting::{
    enumerate_complex_parallel, enumerate_real_parallel, ComplexAlphabet, CountTable,
    ThickenedWindow,
};
use zaremba_core::quadratic::{
    cf_expand_complex, quadrat_from_pair, reconstruct_complex, Field, QuadInt, QuadRat,
};
use zaremba_core::spectral::{
    operator_series_at_zero, orbit_sum, solve_dimension, solve_pole, DEFAULT_SIGMA_TOL,
};

const DEFAULT_W_GRID: [f64; 5] = [-0.2, -0.1, 0.0, 0.1, 0.2];

#[derive(Parser)]
#[command(name = "zaremba", version, about = "Statistics of continued fractions with restricted digits")]
struct Cli {
    /// Optional key=value config file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for the enumeration engines (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a rational (or field rational) into its digit sequence.
    Expand(ExpandArgs),
    /// Enumerate the bounded-digit sets over Q and write the count table.
    Count(CountArgs),
    /// Enumerate over an imaginary quadratic field, keyed by squared height.
    ComplexCount(ComplexCountArgs),
    /// Hausdorff dimension delta_A of the bounded-digit set.
    Dimension(DimensionArgs),
    /// Pole location s0(w) of the counting series.
    Pole(PoleArgs),
    /// Empirical verification battery; exit code 2 on any FAIL.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ExpandArgs {
    /// Field discriminant for complex input (1, 2, 3, 7 or 11).
    #[arg(long)]
    d: Option<u32>,
    /// "a/n" for a real rational, or "(a+bw)/(c+ew)" with --d.
    value: String,
}

#[derive(Args)]
struct CountArgs {
    /// Digit bound A >= 2.
    #[arg(long)]
    a: Option<u64>,
    /// Denominator bound N (accepts "2^k").
    #[arg(long)]
    n: Option<String>,
    /// Thickening exponent gamma; adds the window count to the summary.
    #[arg(long)]
    gamma: Option<f64>,
    /// Comma-separated w values for the weighted columns.
    #[arg(long)]
    w_grid: Option<String>,
    /// Write the count table to this file.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Table format: csv or json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct ComplexCountArgs {
    /// Field discriminant (1, 2, 3, 7 or 11).
    #[arg(long)]
    d: Option<u32>,
    /// Alphabet: attainable digits with field norm <= this bound.
    #[arg(long)]
    max_norm: Option<u64>,
    /// Height-squared bound N (accepts "2^k").
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    w_grid: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct DimensionArgs {
    /// Digit bound A >= 2.
    #[arg(long)]
    a: Option<u64>,
    /// Collocation node count (the solve cross-validates at m and 2m).
    #[arg(long)]
    m: Option<usize>,
    /// Bisection tolerance on sigma.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct PoleArgs {
    #[arg(long)]
    a: Option<u64>,
    /// Weight parameter w (usable window roughly |w| <= 0.3).
    #[arg(long)]
    w: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    a: Option<u64>,
    /// Largest N for the counting checks (accepts "2^k").
    #[arg(long)]
    n_max: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Override the dyadic fit grid, e.g. "2^12..2^20".
    #[arg(long)]
    n_grid: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    /// Run only the operator-identity check.
    #[arg(long)]
    identity_only: bool,
    /// Test hook: use this delta instead of the spectral solve (negative
    /// control; a wrong value must FAIL the exponent check).
    #[arg(long)]
    inject_delta: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

type CliResult<T> = Result<T, String>;

fn run(cli: Cli) -> CliResult<ExitCode> {
    let config = match &cli.config {
        Some(path) => load_config(path)?,
        None => HashMap::new(),
    };
    let threads = pick(cli.threads, &config, "threads")?;
    if let Some(k) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    match cli.command {
        Command::Expand(args) => cmd_expand(args, &config),
        Command::Count(args) => cmd_count(args, &config),
        Command::ComplexCount(args) => cmd_complex_count(args, &config),
        Command::Dimension(args) => cmd_dimension(args, &config),
        Command::Pole(args) => cmd_pole(args, &config),
        Command::Verify(args) => cmd_verify(args, &config),
    }
}

/// Plain key=value lines; '#' starts a comment.
fn load_config(path: &PathBuf) -> CliResult<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {} is not key=value: {raw}", i + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

/// Flag value if set, else the config-file value, else None.
fn pick<T: FromStr>(flag: Option<T>, config: &HashMap<String, String>, key: &str) -> CliResult<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match config.get(key) {
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| format!("bad config value for {key}: {raw}")),
        None => Ok(None),
    }
}

/// "65536" or "2^16".
fn parse_count_spec(s: &str) -> CliResult<u64> {
    let s = s.trim();
    if let Some(exp) = s.strip_prefix("2^") {
        let e: u32 = exp.parse().map_err(|_| format!("bad exponent in {s}"))?;
        if e >= 63 {
            return Err(format!("{s} is out of range"));
        }
        return Ok(1u64 << e);
    }
    s.parse().map_err(|_| format!("bad count {s}"))
}

/// "2^a..2^b" expands to all powers of two in the range.
fn parse_grid_spec(s: &str) -> CliResult<Vec<u64>> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("grid spec must be 2^a..2^b, got {s}"))?;
    let lo = parse_count_spec(lo)?;
    let hi = parse_count_spec(hi)?;
    if !lo.is_power_of_two() || !hi.is_power_of_two() || lo > hi {
        return Err(format!("grid spec must be an increasing dyadic range, got {s}"));
    }
    Ok(dyadic_grid(lo.trailing_zeros(), hi.trailing_zeros()))
}

fn parse_w_grid(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad w value {p}")))
        .collect()
}

fn parse_rational(s: &str) -> CliResult<BigRational> {
    let (num, den) = s
        .split_once('/')
        .ok_or_else(|| format!("expected a/n, got {s}"))?;
    let num: BigInt = num.trim().parse().map_err(|_| format!("bad numerator {num}"))?;
    let den: BigInt = den.trim().parse().map_err(|_| format!("bad denominator {den}"))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(num, den))
}

/// One side of a quadratic literal: "3", "-2", "3-1w", "2w", "-w", "(...)".
fn parse_quad_term(s: &str) -> CliResult<QuadInt> {
    let mut t = s.trim();
    if t.starts_with('(') && t.ends_with(')') {
        t = t[1..t.len() - 1].trim();
    }
    if t.is_empty() {
        return Err(format!("empty term in {s}"));
    }
    let parse_int = |x: &str| -> CliResult<BigInt> {
        x.trim()
            .parse::<BigInt>()
            .map_err(|_| format!("bad integer {x} in {s}"))
    };
    match t.strip_suffix('w') {
        None => Ok(QuadInt::new(parse_int(t)?, BigInt::zero())),
        Some(head) => {
            // Find the +/- separating the constant from the w coefficient,
            // skipping a leading sign.
            let mut split = None;
            for (i, c) in head.char_indices().skip(1) {
                if c == '+' || c == '-' {
                    split = Some(i);
                }
            }
            let (a, b) = match split {
                Some(i) => {
                    let coeff = &head[i..];
                    let b = match coeff {
                        "+" => BigInt::from(1),
                        "-" => BigInt::from(-1),
                        _ => parse_int(coeff)?,
                    };
                    (parse_int(&head[..i])?, b)
                }
                None => {
                    let b = match head.trim() {
                        "" | "+" => BigInt::from(1),
                        "-" => BigInt::from(-1),
                        other => parse_int(other)?,
                    };
                    (BigInt::zero(), b)
                }
            };
            Ok(QuadInt::new(a, b))
        }
    }
}

/// "(a+bw)/(c+ew)" as an exact field element.
fn parse_quad_literal(s: &str, field: Field) -> CliResult<QuadRat> {
    let (num, den) = s
        .trim()
        .split_once('/')
        .ok_or_else(|| format!("expected numerator/denominator, got {s}"))?;
    let num = parse_quad_term(num)?;
    let den = parse_quad_term(den)?;
    quadrat_from_pair(field, &num, &den).map_err(|e| e.to_string())
}

fn cmd_expand(args: ExpandArgs, config: &HashMap<String, String>) -> CliResult<ExitCode> {
    let d = pick(args.d, config, "d")?;
    match d {
        None => {
            let x = parse_rational(&args.value)?;
            if x.is_zero() {
                println!("[] verified");
                return Ok(ExitCode::SUCCESS);
            }
            if x.is_negative() || x >= BigRational::from(BigInt::from(1)) {
                return Err(format!("{} is outside [0, 1)", args.value));
            }
            let digits = cf_expand(&x).map_err(|e| e.to_string())?;
            let body = digits
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            if reconstruct(&digits).map_err(|e| e.to_string())? == x {
                println!("[{body}] verified");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("[{body}] reconstruction mismatch");
                Ok(ExitCode::from(1))
            }
        }
        Some(d) => {
            let field = Field::new(d).map_err(|e| e.to_string())?;
            let z = parse_quad_literal(&args.value, field)?;
            let digits = cf_expand_complex(field, &z).map_err(|e| e.to_string())?;
            let body = digits
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            if reconstruct_complex(field, &digits).map_err(|e| e.to_string())? == z {
                println!("[{body}] verified");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("[{body}] reconstruction mismatch");
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn table_to_json(table: &CountTable, ws: &[f64]) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = table
        .keys()
        .map(|n| {
            let mut row = vec![
                serde_json::json!(n),
                serde_json::json!(table.count(n)),
            ];
            for &w in ws {
                row.push(serde_json::json!(table.weighted(n, w)));
            }
            serde_json::Value::Array(row)
        })
        .collect();
    serde_json::json!({ "ws": ws, "rows": rows })
}

fn write_table(
    table: &CountTable,
    ws: &[f64],
    output: Option<&PathBuf>,
    format: &str,
) -> CliResult<()> {
    let Some(path) = output else { return Ok(()) };
    let text = match format {
        "csv" => table.to_csv(ws),
        "json" => {
            let mut s = serde_json::to_string(&table_to_json(table, ws))
                .map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
        other => return Err(format!("unknown format {other} (use csv or json)")),
    };
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn cmd_count(args: CountArgs, config: &HashMap<String, String>) -> CliResult<ExitCode> {
    let a = pick(args.a, config, "a")?.ok_or("missing --a")?;
    if a < 2 {
        return Err(format!("A = {a} must be >= 2 for counting"));
    }
    let n = parse_count_spec(&pick(args.n, config, "n")?.ok_or("missing --n")?)?;
    if n < 2 {
        return Err(format!("N = {n} must be >= 2"));
    }
    let gamma = pick(args.gamma, config, "gamma")?;
    let ws = match pick(args.w_grid, config, "w-grid")? {
        Some(s) => parse_w_grid(&s)?,
        None => DEFAULT_W_GRID.to_vec(),
    };
    let format = pick(args.format, config, "format")?.unwrap_or_else(|| "csv".into());
    let output = pick(args.output, config, "output")?;

    let table = enumerate_real_parallel(a, n);
    let mut summary = format!("Omega={} Sigma_N={}", table.total(), table.count(n));
    if let Some(g) = gamma {
        let window = ThickenedWindow::new(n, g).map_err(|e| e.to_string())?;
        let thick = table.thickened_count(&window).map_err(|e| e.to_string())?;
        let _ = write!(summary, " Thickened={thick}");
    }
    println!("{summary}");
    write_table(&table, &ws, output.as_ref(), &format)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_complex_count(args: ComplexCountArgs, config: &HashMap<String, String>) -> CliResult<ExitCode> {
    let d = pick(args.d, config, "d")?.ok_or("missing --d")?;
    let field = Field::new(d).map_err(|e| e.to_string())?;
    let max_norm = pick(args.max_norm, config, "max-norm")?.unwrap_or(8);
    let n = parse_count_spec(&pick(args.n, config, "n")?.ok_or("missing --n")?)?;
    let ws = match pick(args.w_grid, config, "w-grid")? {
        Some(s) => parse_w_grid(&s)?,
        None => DEFAULT_W_GRID.to_vec(),
    };
    let format = pick(args.format, config, "format")?.unwrap_or_else(|| "csv".into());
    let output = pick(args.output, config, "output")?;

    let alphabet = ComplexAlphabet::with_norm_bound(field, max_norm);
    let table = enumerate_complex_parallel(&alphabet, n);
    println!(
        "Omega={} Sigma_N={} (alphabet: {} digits)",
        table.total(),
        table.count(n),
        alphabet.len()
    );
    write_table(&table, &ws, output.as_ref(), &format)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_dimension(args: DimensionArgs, config: &HashMap<String, String>) -> CliResult<ExitCode> {
    let a = pick(args.a, config, "a")?.ok_or("missing --a")?;
    let m = pick(args.m, config, "m")?.unwrap_or(32);
    let tol = pick(args.tol, config, "tol")?.unwrap_or(DEFAULT_SIGMA_TOL);
    if a < 2 {
        return Err("dimension is 0 (degenerate alphabet)".into());
    }
    let res = solve_dimension(a, tol, m).map_err(|e| e.to_string())?;
    println!("{}", res.to_json(a));
    eprintln!(
        "# cross-validation: delta(m={}) = {:.15}, delta(m={}) = {:.15}",
        res.m_coarse, res.delta_coarse, res.m_fine, res.delta
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_pole(args: PoleArgs, config: &HashMap<String, String>) -> CliResult<ExitCode> {
    let a = pick(args.a, config, "a")?.ok_or("missing --a")?;
    let w = pick(args.w, config, "w")?.ok_or("missing --w")?;
    let m = pick(args.m, config, "m")?.unwrap_or(32);
    let tol = pick(args.tol, config, "tol")?.unwrap_or(DEFAULT_SIGMA_TOL);
    if a < 2 {
        return Err("dimension is 0 (degenerate alphabet)".into());
    }
    let s0 = solve_pole(a, w, tol, m).map_err(|e| e.to_string())?;
    println!("{}", serde_json::json!({ "A": a, "w": w, "s0": s0, "m": m }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs, config: &HashMap<String, String>) -> CliResult<ExitCode> {
    let a = pick(args.a, config, "a")?.ok_or("missing --a")?;
    if a < 2 {
        return Err(format!("A = {a} must be >= 2"));
    }
    let gamma = pick(args.gamma, config, "gamma")?.unwrap_or(0.5);
    let m = pick(args.m, config, "m")?.unwrap_or(32);
    let mut all_pass = true;

    // Operator identity: truncated series vs exact orbit sums.
    {
        let mut worst: f64 = 0.0;
        for sigma in [0.7, 0.8] {
            for w in [0.0, 0.1] {
                let series = operator_series_at_zero(a, sigma, w, 10, 40);
                let orbit = orbit_sum(a, sigma, w, 10);
                worst = worst.max((series - orbit).abs());
            }
        }
        let pass = worst < 1e-8;
        all_pass &= pass;
        println!(
            "{} identity: max |operator series - orbit sum| = {worst:.3e} (tolerance 1e-8)",
            if pass { "PASS" } else { "FAIL" }
        );
    }

    if args.identity_only {
        return Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(2) });
    }

    let n_max = parse_count_spec(
        &pick(args.n_max, config, "n-max")?.unwrap_or_else(|| "2^16".into()),
    )?;
    let grid = match pick(args.n_grid, config, "n-grid")? {
        Some(spec) => parse_grid_spec(&spec)?,
        None => {
            let hi = 63 - n_max.leading_zeros() as u32;
            if hi < 10 {
                return Err(format!("N max {n_max} too small for a dyadic fit"));
            }
            dyadic_grid(hi.saturating_sub(8).max(8), hi)
        }
    };
    let delta = match pick(args.inject_delta, config, "inject-delta")? {
        Some(injected) => {
            println!("# using injected delta = {injected}");
            injected
        }
        None => solve_dimension(a, DEFAULT_SIGMA_TOL, m)
            .map_err(|e| e.to_string())?
            .delta,
    };

    let table = enumerate_real_parallel(a, *grid.iter().max().expect("nonempty grid"));

    // Exponent of |Omega_{N,A}| vs 2*delta.
    {
        let samples: Vec<(u64, u64)> = grid.iter().map(|&n| (n, table.total_up_to(n))).collect();
        let fit = fit_exponent(&samples).map_err(|e| e.to_string())?;
        let diff = (fit.slope - 2.0 * delta).abs();
        let pass = diff <= 0.03;
        all_pass &= pass;
        println!(
            "{} exponent: slope {:.5} vs 2*delta = {:.5} (|diff| {:.4}, tolerance 0.03)",
            if pass { "PASS" } else { "FAIL" },
            fit.slope,
            2.0 * delta,
            diff
        );
    }

    // Smoothing mechanism at the chosen gamma.
    {
        let report = smoothing_experiment(a, gamma, &grid, delta).map_err(|e| e.to_string())?;
        let diff = (report.fitted.slope - report.predicted_exponent).abs();
        let pass = diff <= 0.05;
        all_pass &= pass;
        println!(
            "{} smoothing: slope {:.5} vs 2*delta - gamma/2 = {:.5} (|diff| {:.4}, tolerance 0.05)",
            if pass { "PASS" } else { "FAIL" },
            report.fitted.slope,
            report.predicted_exponent,
            diff
        );
        let expected_window = 1.0 - gamma / 2.0;
        match &report.window_fit {
            Some(wf) => {
                let wdiff = (wf.slope - expected_window).abs();
                let pass = wdiff <= 0.02;
                all_pass &= pass;
                println!(
                    "{} window-law: slope {:.5} vs 1 - gamma/2 = {:.5} (|diff| {:.4}, tolerance 0.02)",
                    if pass { "PASS" } else { "FAIL" },
                    wf.slope,
                    expected_window,
                    wdiff
                );
            }
            None => println!("PASS window-law: degenerate windows (floor(N*eps) = 0)"),
        }
        let inclusion = report
            .records
            .iter()
            .all(|r| r.sigma <= r.thickened && r.thickened <= r.omega);
        all_pass &= inclusion;
        println!(
            "{} inclusion: Sigma <= Sigma(eps) <= Omega at {}/{} samples",
            if inclusion { "PASS" } else { "FAIL" },
            report
                .records
                .iter()
                .filter(|r| r.sigma <= r.thickened && r.thickened <= r.omega)
                .count(),
            report.records.len()
        );
    }

    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(2) })
}
