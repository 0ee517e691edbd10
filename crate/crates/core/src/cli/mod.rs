//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::closure::{d_bracket, log_matrix, membership_check, zp_rank_lower};
use crate::error::{Error, Result};
use crate::number_field::{leopoldt_check, FieldSpec, Verdict};
use crate::properties::{run_property_suite, Status};
use crate::search::SearchPolicy;

pub mod problem;
pub mod report;
pub mod selftest;

use problem::{parse_group_problem, parse_leopoldt_problem, read_json, GroupProblem};

/// Exit code for a `check` run in which some property failed, or a failed selftest.
pub const EXIT_CHECK_FAILED: i32 = 1;

#[derive(Parser, Debug)]
#[command(name = "padic-closure", version, about = "Certified p-adic closure dimensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Problem file (JSON).
    file: PathBuf,
    #[arg(long, help = "Absolute p-adic precision N (overrides the file)")]
    precision: Option<i64>,
    #[arg(long = "box", help = "Coefficient box B for the subtorus search (overrides the file)")]
    box_bound: Option<u32>,
    #[arg(long, help = "Write the JSON report to this path")]
    json: Option<PathBuf>,
    #[arg(long, help = "Worker threads (default: all cores)")]
    threads: Option<usize>,
    #[arg(long, help = "Include wall-clock timing in the report")]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    #[command(about = "Certified lower bound for the closure dimension")]
    Closure(Common),
    #[command(about = "Bracket the closure dimension between a rank and an algebraic bound")]
    Dbracket(Common),
    #[command(about = "Leopoldt certificates for a field, its units and a list of primes")]
    Leopoldt(Common),
    #[command(about = "Run the dimension-function property suite on a problem")]
    Check(Common),
    #[command(about = "Run built-in checks with known answers")]
    Selftest {
        #[arg(long, help = "Worker threads (default: all cores)")]
        threads: Option<usize>,
    },
}

/// Output of a command: JSON report, human text, exit code.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub text: String,
    pub code: i32,
}

fn load_group(c: &Common) -> Result<GroupProblem> {
    let mut pr = parse_group_problem(&read_json(&c.file)?)?;
    if let Some(n) = c.precision {
        if n < 1 {
            return Err(Error::parse("--precision", "must be at least 1"));
        }
        pr.precision = n;
    }
    if let Some(b) = c.box_bound {
        if b < 1 {
            return Err(Error::parse("--box", "must be at least 1"));
        }
        pr.box_bound = b;
    }
    Ok(pr)
}

fn finish(mut report: serde_json::Map<String, Value>, c: &Common, start: Instant) -> Value {
    if c.timing {
        report.insert(
            "timing".into(),
            json!({"elapsed_ms": start.elapsed().as_secs_f64() * 1e3}),
        );
    }
    Value::Object(report)
}

fn closure_cmd(c: &Common) -> Result<Outcome> {
    let start = Instant::now();
    let pr = load_group(c)?;
    membership_check(&pr.spec, &pr.generators, pr.p)?;
    let logs = log_matrix(&pr.spec, &pr.generators, pr.p, pr.precision)?;
    let rank = zp_rank_lower(&logs)?;
    let mut r = report::header("closure", pr.precision, None);
    r.insert("input".into(), report::group_input(&pr));
    r.insert("membership".into(), json!("ok"));
    r.insert("log_matrix".into(), report::log_profile(&logs));
    r.insert("rank_report".into(), report::rank_report(&rank));
    r.insert("verdict".into(), json!({"closure_dim_lo": rank.rank_lo}));
    let text = format!(
        "p = {}, N = {}: dim of closure >= {} ({} generators)\n",
        pr.p,
        pr.precision,
        rank.rank_lo,
        pr.generators.len()
    );
    Ok(Outcome {
        report: finish(r, c, start),
        text,
        code: 0,
    })
}

fn bracket_report(
    command: &str,
    pr: &GroupProblem,
) -> Result<(serde_json::Map<String, Value>, crate::closure::DBracket)> {
    membership_check(&pr.spec, &pr.generators, pr.p)?;
    let logs = log_matrix(&pr.spec, &pr.generators, pr.p, pr.precision)?;
    let b = d_bracket(
        &pr.spec,
        &pr.generators,
        pr.p,
        pr.precision,
        &SearchPolicy::with_box(pr.box_bound),
    )?;
    let mut r = report::header(command, pr.precision, Some(pr.box_bound));
    r.insert("input".into(), report::group_input(pr));
    r.insert("membership".into(), json!("ok"));
    r.insert("log_matrix".into(), report::log_profile(&logs));
    r.insert("rank_report".into(), report::rank_report(&b.rank_report));
    r.insert("dbracket".into(), report::dbracket(&b));
    Ok((r, b))
}

fn bracket_text(pr: &GroupProblem, b: &crate::closure::DBracket) -> String {
    let mut s = format!(
        "p = {}, N = {}, B = {}: {} <= dim of closure <= d <= {} [{}]\n",
        pr.p,
        pr.precision,
        pr.box_bound,
        b.lo,
        b.hi,
        report::bracket_verdict(b)
    );
    for f in &b.flags {
        s.push_str(&format!("  flag: {f}\n"));
    }
    s
}

fn dbracket_cmd(c: &Common) -> Result<Outcome> {
    let start = Instant::now();
    let pr = load_group(c)?;
    let (mut r, b) = bracket_report("dbracket", &pr)?;
    r.insert("verdict".into(), json!(report::bracket_verdict(&b)));
    Ok(Outcome {
        text: bracket_text(&pr, &b),
        report: finish(r, c, start),
        code: 0,
    })
}

fn check_cmd(c: &Common) -> Result<Outcome> {
    let start = Instant::now();
    let pr = load_group(c)?;
    let (mut r, b) = bracket_report("check", &pr)?;
    let outcomes = run_property_suite(
        &pr.spec,
        &pr.generators,
        pr.p,
        pr.precision,
        &SearchPolicy::with_box(pr.box_bound),
    )?;
    let failed = outcomes.iter().any(|o| o.status == Status::Fail);
    r.insert("properties".into(), report::properties(&outcomes));
    r.insert("verdict".into(), json!(if failed { "FAIL" } else { "PASS" }));
    let mut text = bracket_text(&pr, &b);
    for o in &outcomes {
        let tag = match o.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::NotApplicable => "N/A ",
        };
        text.push_str(&format!("  {tag} {}: {}\n", o.name, o.detail));
    }
    Ok(Outcome {
        report: finish(r, c, start),
        text,
        code: if failed { EXIT_CHECK_FAILED } else { 0 },
    })
}

fn leopoldt_cmd(c: &Common) -> Result<Outcome> {
    let start = Instant::now();
    let mut pr = parse_leopoldt_problem(&read_json(&c.file)?)?;
    if let Some(n) = c.precision {
        if n < 1 {
            return Err(Error::parse("--precision", "must be at least 1"));
        }
        pr.precision = n;
    }
    let field = FieldSpec::new(pr.field.clone())?;
    let results = pr
        .primes
        .par_iter()
        .map(|&p| leopoldt_check(&field, &pr.units, p, pr.precision))
        .collect::<Result<Vec<_>>>()?;
    let mut r = report::header("leopoldt", pr.precision, None);
    r.insert(
        "input".into(),
        json!({
            "field": report::field(&field),
            "units": report::units(&pr.units),
            "primes": pr.primes,
        }),
    );
    r.insert(
        "results".into(),
        Value::Array(results.iter().map(report::leopoldt_row).collect()),
    );
    let mut text = format!(
        "f = {}, signature {:?}, unit rank {}, N = {}\n",
        crate::poly::format_poly(field.f()),
        field.signature(),
        field.unit_rank(),
        pr.precision
    );
    for res in &results {
        let v = match &res.verdict {
            Verdict::Certified { rank } => format!("CERTIFIED rank {rank}"),
            Verdict::Inconclusive { rank_lo, precision } => {
                format!("INCONCLUSIVE rank >= {rank_lo} at N = {precision}")
            }
        };
        text.push_str(&format!("  p = {:>3}: {v}\n", res.p));
    }
    Ok(Outcome {
        report: finish(r, c, start),
        text,
        code: 0,
    })
}

fn selftest_cmd() -> Outcome {
    let results = selftest::run_selftest();
    let mut text = String::new();
    let mut rows = vec![];
    let mut ok = true;
    for (name, r) in &results {
        let pass = matches!(r, Ok(true));
        ok &= pass;
        let detail = match r {
            Err(e) => format!(" ({e})"),
            _ => String::new(),
        };
        text.push_str(&format!("{} {name}{detail}\n", if pass { "PASS" } else { "FAIL" }));
        rows.push(json!({"name": name, "pass": pass}));
    }
    let mut r = report::header("selftest", 0, None);
    r.insert("checks".into(), Value::Array(rows));
    Outcome {
        report: Value::Object(r),
        text,
        code: if ok { 0 } else { EXIT_CHECK_FAILED },
    }
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    std::fs::write(path, report::render(v))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::parse("--threads", "must be at least 1")),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Closure(c) => with_threads(c.threads, || closure_cmd(c))?,
        Command::Dbracket(c) => with_threads(c.threads, || dbracket_cmd(c))?,
        Command::Leopoldt(c) => with_threads(c.threads, || leopoldt_cmd(c))?,
        Command::Check(c) => with_threads(c.threads, || check_cmd(c))?,
        Command::Selftest { threads } => with_threads(*threads, selftest_cmd),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let json_path = match &cli.command {
        Command::Closure(c) | Command::Dbracket(c) | Command::Leopoldt(c) | Command::Check(c) => {
            c.json.clone()
        }
        Command::Selftest { .. } => None,
    };
    let outcome = execute(&cli.command).and_then(|o| {
        if let Some(path) = &json_path {
            write_json(path, &o.report)?;
        }
        Ok(o)
    });
    match outcome {
        Ok(o) => {
            print!("{}", o.text);
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
