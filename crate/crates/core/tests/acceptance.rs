//! Acceptance run: one PASS/FAIL line per criterion; exits non-zero on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use padic_closure::closure::{
    additive_generators, d_bracket, log_matrix, Component, Coordinate, Generator, GroupSpec,
    Witness,
};
use padic_closure::elliptic::{elliptic_log, CurveSpec, RationalPoint};
use padic_closure::number_field::{leopoldt_check, FieldSpec, Verdict};
use padic_closure::properties::{run_property_suite, Status};
use padic_closure::search::SearchPolicy;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ints(v: &Value) -> Vec<BigInt> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|c| BigInt::from(c.as_i64().unwrap()))
        .collect()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn leopoldt_certification() -> Outcome {
    let golden = common::read_value(&common::fixture_dir().join("golden/leopoldt_logs.json"));
    let cases = golden["cases"].as_array().unwrap();
    let mut slowest = Duration::ZERO;
    for case in cases {
        let field = FieldSpec::new(ints(&case["field"])).map_err(|e| e.to_string())?;
        let units: Vec<_> = case["units"].as_array().unwrap().iter().map(ints).collect();
        let p = case["p"].as_u64().unwrap();
        let start = Instant::now();
        let r = leopoldt_check(&field, &units, p, 20).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        slowest = slowest.max(took);
        let (r1, r2) = field.signature();
        ensure(r.verdict == Verdict::Certified { rank: r1 + r2 - 1 }, || {
            format!("{} p={p}: {:?}", case["fixture"], r.verdict)
        })?;
        ensure(took < Duration::from_secs(1), || format!("{} p={p}: {took:?}", case["fixture"]))?;
        for (row, want) in r.log_rows.iter().zip(case["logs"].as_array().unwrap()) {
            for (s, w) in row.iter().zip(want.as_array().unwrap()) {
                let got = common::residue(s, 20).map(|x| x.to_string());
                ensure(got.as_deref() == w.as_str(), || {
                    format!("{} p={p}: log digit mismatch", case["fixture"])
                })?;
            }
        }
    }
    Ok(format!(
        "{} (field, prime) cases CERTIFIED at N = 20 and equal to the oracle mod p^20; slowest {:.1} ms",
        cases.len(),
        slowest.as_secs_f64() * 1e3
    ))
}

fn dbracket_closure() -> Outcome {
    let spec = GroupSpec::new(vec![Component::Multiplicative; 2]).map_err(|e| e.to_string())?;
    let scalar = |a: i64, b: i64| vec![Coordinate::Scalar(q(a)), Coordinate::Scalar(q(b))];
    let gens = vec![scalar(2, 1), scalar(3, 1), scalar(6, 5)];
    let b = d_bracket(&spec, &gens, 7, 20, &SearchPolicy::with_box(1)).map_err(|e| e.to_string())?;
    ensure(
        (b.lo, b.hi, b.certified) == (2, 2, true)
            && b.witness == Witness::Subtorus { basis: vec![vec![1, 0]] },
        || format!("<(2,1),(3,1),(6,5)>: ({}, {}) witness {:?}", b.lo, b.hi, b.witness),
    )?;
    let r = d_bracket(&spec, &[scalar(2, 3)], 7, 20, &SearchPolicy::default())
        .map_err(|e| e.to_string())?;
    ensure((r.lo, r.hi, r.certified) == (1, 1, true), || {
        format!("<(2,3)>: ({}, {})", r.lo, r.hi)
    })?;
    Ok("(2,1),(3,1),(6,5) -> (2, 2) on the first-coordinate subtorus; (2,3) -> (1, 1)".into())
}

fn additive_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6761);
    let primes = [3u64, 5, 7, 11];
    for trial in 0..100 {
        let k = rng.gen_range(1..=6);
        let n = rng.gen_range(1..=6);
        let rows: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect())
            .collect();
        // Force some dependent rows so ranks below min(k, n) occur.
        let rows: Vec<Vec<i64>> = if k > 2 && trial % 3 == 0 {
            let mut r = rows;
            r[k - 1] = r[0].iter().zip(&r[1]).map(|(a, b)| 2 * a - b).collect();
            r
        } else {
            rows
        };
        let p = *primes.choose(&mut rng).unwrap();
        let spec = GroupSpec::new(vec![Component::Additive; n]).map_err(|e| e.to_string())?;
        let b = d_bracket(&spec, &additive_generators(&rows), p, 20, &SearchPolicy::default())
            .map_err(|e| e.to_string())?;
        let qrows: Vec<Vec<BigRational>> =
            rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        let rank = common::rank_q(&qrows);
        ensure(b.lo == rank && b.hi == rank, || {
            format!("trial {trial}: bracket ({}, {}) vs rank {rank} for {rows:?}", b.lo, b.hi)
        })?;
    }
    Ok("100/100 random vector-group instances have closure dim = rational rank".into())
}

fn elliptic_rank_one() -> Outcome {
    let e = CurveSpec::from_i64(0, -2).map_err(|e| e.to_string())?;
    let pt = RationalPoint::from_i64(&e, 3, 5).map_err(|e| e.to_string())?;
    let two_p = pt.double(&e);
    let spec = GroupSpec::new(vec![Component::EllipticCurve(e.clone())]).map_err(|e| e.to_string())?;
    let mut notes = vec![];
    for p in [5u64, 11] {
        let log = elliptic_log(&e, &pt, p, 10).map_err(|e| e.to_string())?;
        ensure(log.is_provably_nonzero(), || format!("p={p}: log P not provably nonzero"))?;
        let log2 = elliptic_log(&e, &two_p, p, 10).map_err(|e| e.to_string())?;
        let doubled = &log + &log;
        ensure(log2.agrees_with(&doubled), || format!("p={p}: log 2P != 2 log P"))?;
        let b = d_bracket(&spec, &[vec![Coordinate::Point(pt.clone())]], p, 10, &SearchPolicy::default())
            .map_err(|e| e.to_string())?;
        ensure((b.lo, b.hi, b.certified) == (1, 1, true), || {
            format!("p={p}: bracket ({}, {})", b.lo, b.hi)
        })?;
        notes.push(format!("p={p}: v(log P) = {}", log.valuation().unwrap()));
    }
    Ok(format!("(3,5) on y^2 = x^3 - 2 certified (1, 1); log 2P = 2 log P; {}", notes.join(", ")))
}

const SMALL_PRIMES: [i64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

fn random_split_torus(rng: &mut ChaCha8Rng) -> (GroupSpec, Vec<Generator>, u64) {
    let n = rng.gen_range(1..=3);
    let k = rng.gen_range(1..=3);
    let coord = |rng: &mut ChaCha8Rng| {
        let mut x = q(1);
        for _ in 0..2 {
            let prime = *SMALL_PRIMES.choose(rng).unwrap();
            let e: i32 = rng.gen_range(-3..=3);
            x *= BigRational::from_integer(BigInt::from(prime)).pow(e);
        }
        if rng.gen_bool(0.1) {
            x = -x;
        }
        Coordinate::Scalar(x)
    };
    let gens = (0..k).map(|_| (0..n).map(|_| coord(rng)).collect()).collect();
    let p = *[53u64, 59, 61].choose(rng).unwrap();
    (GroupSpec::new(vec![Component::Multiplicative; n]).unwrap(), gens, p)
}

fn property_suite() -> Outcome {
    let mut checked = 0;
    let run = |name: &str, spec: &GroupSpec, gens: &[Generator], p, n, b| -> Result<usize, String> {
        let outcomes = run_property_suite(spec, gens, p, n, &SearchPolicy::with_box(b))
            .map_err(|e| format!("{name}: {e}"))?;
        if let Some(f) = outcomes.iter().find(|o| o.status == Status::Fail) {
            return Err(format!("{name}: {} failed: {}", f.name, f.detail));
        }
        Ok(outcomes.iter().filter(|o| o.status == Status::Pass).count())
    };
    let mut passes = 0;
    for (name, pr) in common::group_problems() {
        passes += run(&name, &pr.spec, &pr.generators, pr.p, pr.precision, pr.box_bound)?;
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..50 {
        let (spec, gens, p) = random_split_torus(&mut rng);
        passes += run(&format!("random instance {i}"), &spec, &gens, p, 20, 1)?;
        checked += 1;
    }
    Ok(format!("{checked} problems ({} fixtures + 50 random split tori), {passes} property checks passed, 0 failed", checked - 50))
}

fn precision_soundness() -> Outcome {
    let mut entries = 0;
    for (name, pr) in common::group_problems() {
        let n = pr.precision;
        let lo = log_matrix(&pr.spec, &pr.generators, pr.p, n).map_err(|e| e.to_string())?;
        let hi = log_matrix(&pr.spec, &pr.generators, pr.p, 2 * n).map_err(|e| e.to_string())?;
        for (a, b) in lo.iter().flatten().zip(hi.iter().flatten()) {
            ensure(a.agrees_with(b), || format!("{name}: digits changed at 2N"))?;
            entries += 1;
        }
        let policy = SearchPolicy::with_box(pr.box_bound);
        let b1 = d_bracket(&pr.spec, &pr.generators, pr.p, n, &policy).map_err(|e| e.to_string())?;
        let b2 = d_bracket(&pr.spec, &pr.generators, pr.p, 2 * n, &policy).map_err(|e| e.to_string())?;
        ensure(b2.lo >= b1.lo && b1.hi == b2.hi, || format!("{name}: bracket regressed at 2N"))?;
        ensure(!b1.certified || b2.certified && b2.lo == b1.lo, || {
            format!("{name}: certified rank not reproduced at 2N")
        })?;
    }
    for path in common::fixtures("leopoldt") {
        let v = common::read_value(&path);
        let field = FieldSpec::new(ints(&v["field"])).map_err(|e| e.to_string())?;
        let units: Vec<_> = v["units"].as_array().unwrap().iter().map(ints).collect();
        let n = v["precision"].as_i64().unwrap();
        for p in v["primes"].as_array().unwrap().iter().map(|p| p.as_u64().unwrap()) {
            let a = leopoldt_check(&field, &units, p, n).map_err(|e| e.to_string())?;
            let b = leopoldt_check(&field, &units, p, 2 * n).map_err(|e| e.to_string())?;
            ensure(a.verdict == b.verdict || matches!(a.verdict, Verdict::Inconclusive { .. }), || {
                format!("{}: verdict changed at p={p}", path.display())
            })?;
            for (x, y) in a.log_rows.iter().flatten().zip(b.log_rows.iter().flatten()) {
                ensure(x.agrees_with(y), || format!("{}: digits changed at p={p}", path.display()))?;
                entries += 1;
            }
        }
    }
    Ok(format!("{entries} log entries and every certified rank reproduced at N' = 2N"))
}

fn run_cli(args: &[&str], json: &Path, threads: &str) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_padic-closure"))
        .args(args)
        .args(["--threads", threads, "--json"])
        .arg(json)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || {
        format!("{args:?}: exit {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stderr))
    })?;
    std::fs::read(json).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("padic-closure-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut jobs = vec![];
    for f in common::fixtures("problems") {
        for cmd in ["closure", "dbracket", "check"] {
            jobs.push((cmd, f.clone()));
        }
    }
    for f in common::fixtures("leopoldt") {
        jobs.push(("leopoldt", f));
    }
    for (i, (cmd, f)) in jobs.iter().enumerate() {
        let file = f.to_string_lossy();
        let one = run_cli(&[cmd, &file], &dir.join(format!("{i}-1.json")), "1")?;
        let eight = run_cli(&[cmd, &file], &dir.join(format!("{i}-8.json")), "8")?;
        ensure(one == eight, || format!("{cmd} {file}: reports differ"))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} reports byte-identical under --threads 1 and --threads 8", jobs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 leopoldt certification", leopoldt_certification),
        ("2 d-bracket closure", dbracket_closure),
        ("3 vector-group exactness", additive_exactness),
        ("4 elliptic rank one", elliptic_rank_one),
        ("5 property suite", property_suite),
        ("6 precision soundness", precision_soundness),
        ("7 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{secs:.2} s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{secs:.2} s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
