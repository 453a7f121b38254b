//! icx: exact integer complexity tables, certified digit bounds, expression
//! synthesis, and defect analytics from the command line.

mod numparse;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::json;

use icx_core::analysis::{
    conjecture_scan, defect_growth, density_scan, extreme_discrepancy, ratio_scan, s_j_points,
    star_discrepancy,
};
use icx_core::defect::{
    census, defect_record, discard_thresholds, verify_constant_system, verify_sets,
    CheckStatus, ClassificationParams, DEFAULT_SCAN_LIMIT,
};
use icx_core::digit_bounds::{certify_base, DigitBoundTable};
use icx_core::expr::reconstruct;
use icx_core::synth::{ln_big, asymptotic_params, synthesize};
use icx_core::table::{build_table, ComplexityTable};

/// Bases above this need `--huge` (the certification working set grows with
/// the divisor sum of the base).
const HUGE_BASE_THRESHOLD: u64 = 1_000_000;

#[derive(Parser)]
#[command(name = "icx", version, about = "Integer complexity toolkit")]
struct Cli {
    /// Complexity table file; falls back to $ICX_TABLE, then to building
    /// the needed table in memory
    #[arg(long, global = true)]
    table: Option<PathBuf>,

    /// Output format (each subcommand picks a sensible default)
    #[arg(long, global = true, value_enum)]
    format: Option<OutFormat>,

    /// Cap worker threads (default: hardware concurrency)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Acknowledge large-base digit certification and its memory cost
    #[arg(long, global = true, default_value_t = false)]
    huge: bool,

    /// Stamp output with the generation time (off by default so identical
    /// invocations produce identical bytes)
    #[arg(long, global = true, default_value_t = false)]
    timestamp: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Build an exact complexity table and write it to disk
    Build {
        #[arg(long)]
        limit: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact complexity of one number
    Query { n: String },
    /// Reconstruct an optimal expression for a number in the table
    Expr { n: String },
    /// Defect, leader flag, and defect class of one number
    Defect {
        n: String,
        #[arg(long, default_value_t = 0.48)]
        sigma: f64,
    },
    /// Exact counts of leaders/integers per defect class and interval
    Census {
        #[arg(long, default_value_t = 0.48)]
        sigma: f64,
        #[arg(long, default_value_t = 6)]
        kmax: u32,
        #[arg(long, default_value_t = 10)]
        mmax: u32,
    },
    /// Run a verification suite (sets | constants | all)
    Verify {
        #[arg(long, default_value = "sets")]
        suite: String,
        /// Scan limit for the sets suite (default 3^13 = 1594323)
        #[arg(long)]
        limit: Option<String>,
    },
    /// Certified digit-cost bounds for a base
    Drb {
        #[arg(long)]
        base: String,
    },
    /// Synthesize an explicit expression for an arbitrarily large number
    Synth {
        n: String,
        #[arg(long, default_value = "24")]
        base: String,
        #[arg(long, default_value = "1")]
        kmin: String,
        #[arg(long, default_value = "64")]
        kmax: String,
    },
    /// Asymptotic multiplier-count parameters for a number
    Params { n: String },
    /// Statistics scans over a table
    Stats {
        #[command(subcommand)]
        stats: StatsCommand,
    },
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Count n <= N with cost(n) <= t log3 n over a grid of N
    Density {
        #[arg(long)]
        t: String,
        #[arg(long)]
        grid: String,
    },
    /// Count n <= N with defect below r over a grid of N
    Growth {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        grid: String,
    },
    /// Maximize cost(n) / ln n over 2 <= n <= max
    Ratio {
        #[arg(long)]
        max: String,
    },
    /// Discrepancy of the remainder point set of n at one digit position
    Discrepancy {
        #[arg(long)]
        n: String,
        #[arg(long, default_value = "2")]
        base: String,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        k: String,
    },
    /// Check cost(2^a 3^b 5^c) = 2a + 3b + 5c up to a limit
    Conjecture {
        #[arg(long)]
        max: String,
    },
}

struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<icx_core::Error> for CliError {
    fn from(e: icx_core::Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError(s)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

struct Output {
    format: OutFormat,
    timestamp: bool,
}

impl Output {
    fn stamp_line(&self) {
        if self.timestamp {
            println!("# generated_at_unix {}", unix_now());
        }
    }

    fn json(&self, mut value: serde_json::Value) {
        if self.timestamp {
            if let Some(obj) = value.as_object_mut() {
                obj.insert("generated_at_unix".into(), json!(unix_now()));
            }
        }
        println!("{value}");
    }
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError(format!("thread pool: {e}")))?;
    }
    let pick = |default: OutFormat| Output {
        format: cli.format.unwrap_or(default),
        timestamp: cli.timestamp,
    };

    match &cli.command {
        Command::Build { limit, out } => {
            let limit = numparse::parse_count(limit)?;
            let table = build_table(limit)?;
            table.save(out)?;
            let out_fmt = pick(OutFormat::Text);
            match out_fmt.format {
                OutFormat::Json => out_fmt.json(json!({
                    "limit": limit,
                    "path": out.display().to_string(),
                    "bytes": limit + 16,
                })),
                _ => {
                    out_fmt.stamp_line();
                    println!("built limit={} path={}", limit, out.display());
                }
            }
            Ok(0)
        }

        Command::Query { n } => {
            let n = numparse::parse_count(n)?;
            let table = obtain_table(&cli, n.max(1))?;
            let cost = table.query(n)?;
            let out = pick(OutFormat::Text);
            match out.format {
                OutFormat::Json => out.json(json!({"n": n, "cost": cost})),
                OutFormat::Csv => {
                    out.stamp_line();
                    println!("n,cost");
                    println!("{n},{cost}");
                }
                OutFormat::Text => {
                    out.stamp_line();
                    println!("{cost}");
                }
            }
            Ok(0)
        }

        Command::Expr { n } => {
            let n = numparse::parse_count(n)?;
            let table = obtain_table(&cli, n.max(1))?;
            let e = reconstruct(&table, n)?;
            let out = pick(OutFormat::Text);
            match out.format {
                OutFormat::Json => out.json(json!({
                    "n": n,
                    "cost": e.ones(),
                    "expression": e.render(),
                })),
                OutFormat::Csv => {
                    out.stamp_line();
                    println!("n,cost,expression");
                    println!("{n},{},{}", e.ones(), e.render());
                }
                OutFormat::Text => {
                    out.stamp_line();
                    println!("{}", e.render());
                }
            }
            Ok(0)
        }

        Command::Defect { n, sigma } => {
            let n = numparse::parse_count(n)?;
            let table = obtain_table(&cli, n.max(1))?;
            let rec = defect_record(&table, n, *sigma)?;
            let out = pick(OutFormat::Text);
            match out.format {
                OutFormat::Json => out.json(serde_json::to_value(&rec).unwrap()),
                OutFormat::Csv => {
                    out.stamp_line();
                    println!("n,cost,defect,leader,class_index");
                    println!(
                        "{},{},{},{},{}",
                        rec.n, rec.cost, rec.defect, rec.leader, rec.class_index
                    );
                }
                OutFormat::Text => {
                    out.stamp_line();
                    println!(
                        "n={} cost={} defect={:.6} leader={} class={}",
                        rec.n, rec.cost, rec.defect, rec.leader, rec.class_index
                    );
                }
            }
            Ok(0)
        }

        Command::Census { sigma, kmax, mmax } => {
            let needed = 3u64
                .checked_pow(*mmax)
                .ok_or_else(|| CliError("mmax too large".into()))?;
            let table = obtain_table(&cli, needed)?;
            let matrix = census(&table, *sigma, *kmax, *mmax)?;
            let out = pick(OutFormat::Csv);
            match out.format {
                OutFormat::Json => out.json(json!({
                    "sigma": sigma,
                    "k_max": kmax,
                    "m_max": mmax,
                    "rows": serde_json::to_value(matrix.rows()).unwrap(),
                })),
                _ => {
                    out.stamp_line();
                    println!("k,m,u_b,u_n");
                    for row in matrix.rows() {
                        println!("{},{},{},{}", row.k, row.m, row.u_b, row.u_n);
                    }
                }
            }
            Ok(0)
        }

        Command::Verify { suite, limit } => run_verify(&cli, suite, limit.as_deref(), pick),

        Command::Drb { base } => {
            let base = numparse::parse_count(base)?;
            if base > HUGE_BASE_THRESHOLD && !cli.huge {
                let estimate = DigitBoundTable::memory_estimate_bytes(base);
                eprintln!(
                    "base {base} needs roughly {} MB for certification; pass --huge to proceed",
                    estimate / (1 << 20)
                );
                return Err(CliError(format!(
                    "base {base} exceeds {HUGE_BASE_THRESHOLD} and --huge was not given"
                )));
            }
            if base > HUGE_BASE_THRESHOLD {
                eprintln!(
                    "note: certifying base {base}, estimated working set {} MB",
                    DigitBoundTable::memory_estimate_bytes(base) / (1 << 20)
                );
            }
            let table = obtain_table(&cli, base)?;
            let db = certify_base(base, &table)?;
            let out = pick(OutFormat::Text);
            match out.format {
                OutFormat::Json => out.json(json!({
                    "base": base,
                    "sum": db.sum(),
                    "averaged_constant": db.averaged_constant(),
                    "rows": serde_json::to_value(db.export_rows()).unwrap(),
                })),
                OutFormat::Csv => {
                    out.stamp_line();
                    println!("base,r,bound,witness");
                    for row in db.export_rows() {
                        println!("{},{},{},\"{}\"", row.base, row.r, row.bound, row.witness);
                    }
                }
                OutFormat::Text => {
                    out.stamp_line();
                    println!("base {base}");
                    println!("sum {}", db.sum());
                    println!("averaged_constant {:.4}", db.averaged_constant());
                }
            }
            Ok(0)
        }

        Command::Synth { n, base, kmin, kmax } => {
            let n = numparse::parse_big(n)?;
            let base = numparse::parse_count(base)?;
            let k_lo = numparse::parse_count(kmin)?;
            let k_hi = numparse::parse_count(kmax)?;
            let needed = base.max(k_hi.saturating_sub(1)).max(2);
            let table = obtain_table(&cli, needed)?;
            let db = certify_base(base, &table)?;
            let res = synthesize(&n, &db, k_lo..k_hi, &table)?;
            let ratio = res.predicted_cost as f64 / ln_big(&res.n);
            let out = pick(OutFormat::Json);
            match out.format {
                OutFormat::Json => out.json(json!({
                    "n": res.n.to_string(),
                    "base": res.base,
                    "k": res.k,
                    "r": res.remainder,
                    "digits": res.digits,
                    "cost": res.predicted_cost,
                    "ratio_cost_over_log_n": ratio,
                    "expression": res.expression.render(),
                })),
                OutFormat::Csv => {
                    out.stamp_line();
                    println!("n,base,k,r,cost,ratio_cost_over_log_n,expression");
                    println!(
                        "{},{},{},{},{},{},{}",
                        res.n,
                        res.base,
                        res.k,
                        res.remainder,
                        res.predicted_cost,
                        ratio,
                        res.expression.render()
                    );
                }
                OutFormat::Text => {
                    out.stamp_line();
                    println!("n {}", res.n);
                    println!("k {} r {} digits {:?}", res.k, res.remainder, res.digits);
                    println!("cost {} ratio {:.4}", res.predicted_cost, ratio);
                    println!("{}", res.expression.render());
                }
            }
            Ok(0)
        }

        Command::Params { n } => {
            let n = numparse::parse_big(n)?;
            let pc = asymptotic_params(&n)?;
            let out = pick(OutFormat::Json);
            match out.format {
                OutFormat::Json => out.json(json!({
                    "n": pc.n.to_string(),
                    "p": pc.p,
                    "K": pc.k,
                })),
                OutFormat::Csv => {
                    out.stamp_line();
                    println!("n,p,K");
                    println!("{},{},{}", pc.n, pc.p, pc.k);
                }
                OutFormat::Text => {
                    out.stamp_line();
                    println!("p {}", pc.p);
                    println!("K {}", pc.k);
                }
            }
            Ok(0)
        }

        Command::Stats { stats } => run_stats(&cli, stats, pick),
    }
}

fn run_verify(
    cli: &Cli,
    suite: &str,
    limit: Option<&str>,
    pick: impl Fn(OutFormat) -> Output,
) -> Result<u8, CliError> {
    let out = pick(OutFormat::Json);
    match suite {
        "sets" => {
            let scan_limit = match limit {
                Some(s) => numparse::parse_count(s)?,
                None => DEFAULT_SCAN_LIMIT,
            };
            let table = obtain_table(cli, scan_limit)?;
            let report = verify_sets(&table, 0.48, scan_limit)?;
            let passed = report.all_passed();
            match out.format {
                OutFormat::Json => out.json(serde_json::to_value(&report).unwrap()),
                _ => {
                    out.stamp_line();
                    for c in &report.checks {
                        let status = match c.status {
                            CheckStatus::Pass => "pass",
                            CheckStatus::Fail => "FAIL",
                            CheckStatus::ReportOnly => "report-only",
                        };
                        println!("({}) {}: {}", c.check_id, status, c.description);
                        if c.status != CheckStatus::Pass {
                            println!("    expected {}", c.expected);
                            println!("    actual   {}", c.actual);
                        }
                        for w in &c.witnesses {
                            println!("    note: {w}");
                        }
                    }
                    println!("{}", if passed { "all checks passed" } else { "FAILURES" });
                }
            }
            Ok(if passed { 0 } else { 1 })
        }
        "constants" => {
            let params = ClassificationParams::default();
            let report = verify_constant_system(&params);
            let thresholds = discard_thresholds(params.lambda, params.big_c);
            let ok = report.all_ok();
            match out.format {
                OutFormat::Json => out.json(json!({
                    "constants": serde_json::to_value(&report).unwrap(),
                    "discard_thresholds": thresholds,
                })),
                _ => {
                    out.stamp_line();
                    println!("six_term_sum {:.6} (< 1: {})", report.six_term_sum, report.sum_ok);
                    println!("gamma_check {:.6} (< 1: {})", report.gamma_check, report.gamma_ok);
                    println!(
                        "sigma_ok {} lambda_ok {} small_c_ok {}",
                        report.sigma_ok, report.lambda_ok, report.small_c_ok
                    );
                    let ms: Vec<String> =
                        thresholds.iter().map(|(k, m)| format!("k={k}:m>={m}")).collect();
                    println!("discard_thresholds {}", ms.join(" "));
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
        "all" => {
            let scan_limit = match limit {
                Some(s) => numparse::parse_count(s)?,
                None => DEFAULT_SCAN_LIMIT,
            };
            let table = obtain_table(cli, scan_limit)?;
            let sets = verify_sets(&table, 0.48, scan_limit)?;
            let params = ClassificationParams::default();
            let constants = verify_constant_system(&params);
            let thresholds = discard_thresholds(params.lambda, params.big_c);
            let ok = sets.all_passed() && constants.all_ok();
            out.json(json!({
                "sets": serde_json::to_value(&sets).unwrap(),
                "constants": serde_json::to_value(&constants).unwrap(),
                "discard_thresholds": thresholds,
            }));
            Ok(if ok { 0 } else { 1 })
        }
        other => Err(CliError(format!(
            "unknown suite '{other}' (expected sets, constants, or all)"
        ))),
    }
}

fn run_stats(
    cli: &Cli,
    stats: &StatsCommand,
    pick: impl Fn(OutFormat) -> Output,
) -> Result<u8, CliError> {
    match stats {
        StatsCommand::Density { t, grid } => {
            let (t_num, t_den) = numparse::parse_decimal_rational(t)?;
            let grid = numparse::parse_grid(grid)?;
            let top = grid.iter().copied().max().unwrap_or(1);
            let table = obtain_table(cli, top)?;
            let scan = density_scan(&table, t_num, t_den, &grid)?;
            let out = pick(OutFormat::Csv);
            match out.format {
                OutFormat::Json => out.json(serde_json::to_value(&scan).unwrap()),
                _ => {
                    out.stamp_line();
                    println!("n_max,count,fraction");
                    for row in &scan.rows {
                        println!("{},{},{}", row.n_max, row.count, row.fraction);
                    }
                }
            }
            Ok(0)
        }
        StatsCommand::Growth { r, grid } => {
            let grid = numparse::parse_grid(grid)?;
            let top = grid.iter().copied().max().unwrap_or(1);
            let table = obtain_table(cli, top)?;
            let scan = defect_growth(&table, *r, &grid)?;
            let out = pick(OutFormat::Csv);
            match out.format {
                OutFormat::Json => out.json(serde_json::to_value(&scan).unwrap()),
                OutFormat::Csv => {
                    out.stamp_line();
                    println!("n_max,r,count");
                    for row in &scan.rows {
                        println!("{},{},{}", row.n_max, scan.r, row.count);
                    }
                }
                OutFormat::Text => {
                    out.stamp_line();
                    for row in &scan.rows {
                        println!("N={} count={}", row.n_max, row.count);
                    }
                    match scan.fitted_exponent {
                        Some(e) => println!("fitted_exponent {e:.3}"),
                        None => println!("fitted_exponent n/a"),
                    }
                }
            }
            Ok(0)
        }
        StatsCommand::Ratio { max } => {
            let max = numparse::parse_count(max)?;
            let table = obtain_table(cli, max)?;
            let r = ratio_scan(&table, max)?;
            let out = pick(OutFormat::Csv);
            match out.format {
                OutFormat::Json => out.json(serde_json::to_value(&r).unwrap()),
                OutFormat::Csv => {
                    out.stamp_line();
                    println!("n,cost,ratio");
                    println!("{},{},{}", r.n, r.cost, r.ratio);
                }
                OutFormat::Text => {
                    out.stamp_line();
                    println!("n={} cost={} ratio={:.4}", r.n, r.cost, r.ratio);
                }
            }
            Ok(0)
        }
        StatsCommand::Discrepancy { n, base, j, k } => {
            let n = numparse::parse_big(n)?;
            let base = numparse::parse_count(base)?;
            let count = numparse::parse_count(k)?;
            let ps = s_j_points(&n, base, *j, count)?;
            let star = star_discrepancy(&ps.points)?;
            let star_f = star.to_f64().unwrap_or(f64::NAN);
            let extreme = if count <= 10_000 {
                Some(extreme_discrepancy(&ps.points)?)
            } else {
                None
            };
            let out = pick(OutFormat::Csv);
            match out.format {
                OutFormat::Json => out.json(json!({
                    "n": n.to_string(),
                    "base": base,
                    "j": j,
                    "k": count,
                    "star": star.to_string(),
                    "star_value": star_f,
                    "extreme": extreme.as_ref().map(|e| e.to_string()),
                    "extreme_value": extreme.as_ref().map(|e| e.to_f64().unwrap_or(f64::NAN)),
                })),
                OutFormat::Csv => {
                    out.stamp_line();
                    println!("n,base,j,k,star,extreme");
                    println!(
                        "{},{},{},{},{},{}",
                        n,
                        base,
                        j,
                        count,
                        star_f,
                        extreme
                            .as_ref()
                            .map(|e| e.to_f64().unwrap_or(f64::NAN).to_string())
                            .unwrap_or_default()
                    );
                }
                OutFormat::Text => {
                    out.stamp_line();
                    println!("star {} = {:.6}", star, star_f);
                    match extreme {
                        Some(e) => {
                            println!("extreme {} = {:.6}", e, e.to_f64().unwrap_or(f64::NAN))
                        }
                        None => println!("extreme skipped (more than 10000 points)"),
                    }
                }
            }
            Ok(0)
        }
        StatsCommand::Conjecture { max } => {
            let max = numparse::parse_count(max)?;
            let table = obtain_table(cli, max)?;
            let rep = conjecture_scan(&table, max)?;
            let out = pick(OutFormat::Text);
            match out.format {
                OutFormat::Json => out.json(serde_json::to_value(&rep).unwrap()),
                OutFormat::Csv => {
                    out.stamp_line();
                    println!("a,b,c,value,expected,actual");
                    for v in &rep.violations {
                        println!(
                            "{},{},{},{},{},{}",
                            v.a, v.b, v.c, v.value, v.expected, v.actual
                        );
                    }
                }
                OutFormat::Text => {
                    out.stamp_line();
                    println!(
                        "checked {} candidates up to {}, {} violations",
                        rep.checked,
                        rep.n_max,
                        rep.violations.len()
                    );
                    for v in &rep.violations {
                        println!(
                            "  2^{} 3^{} 5^{} = {}: expected {}, table {}",
                            v.a, v.b, v.c, v.value, v.expected, v.actual
                        );
                    }
                }
            }
            Ok(if rep.violations.is_empty() { 0 } else { 1 })
        }
    }
}

/// Load the table named by --table or $ICX_TABLE, or build one big enough.
fn obtain_table(cli: &Cli, needed: u64) -> Result<ComplexityTable, CliError> {
    let path = cli
        .table
        .clone()
        .or_else(|| std::env::var_os("ICX_TABLE").map(PathBuf::from));
    match path {
        Some(p) => {
            let table = ComplexityTable::load(&p)?;
            if table.limit() < needed {
                return Err(CliError(format!(
                    "table {} covers only {} entries, need {}",
                    p.display(),
                    table.limit(),
                    needed
                )));
            }
            Ok(table)
        }
        None => {
            eprintln!("note: building a table to {needed} in memory (use --table to reuse a saved one)");
            Ok(build_table(needed)?)
        }
    }
}
