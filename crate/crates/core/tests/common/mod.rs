#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use padic_closure::arith::pow_u;
use padic_closure::cli::problem::{parse_group_problem, parse_json, GroupProblem};
use padic_closure::padic::PadicScalar;
use serde_json::Value;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixtures(kind: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(fixture_dir().join(kind))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

pub fn read_value(path: &std::path::Path) -> Value {
    parse_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn group_problems() -> Vec<(String, GroupProblem)> {
    fixtures("problems")
        .into_iter()
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, parse_group_problem(&read_value(&p)).unwrap())
        })
        .collect()
}

/// The integral value of `s` reduced mod `p^digits`, if `s` is known that far.
pub fn residue(s: &PadicScalar, digits: i64) -> Option<BigInt> {
    let modulus = BigInt::from(pow_u(s.p(), digits as u32));
    if s.is_exact_zero() {
        return Some(BigInt::from(0));
    }
    if s.abs_precision()? < digits {
        return None;
    }
    let q = s.representative();
    assert!(q.is_integer(), "expected an integral log value");
    Some(q.to_integer().mod_floor(&modulus))
}

/// Rank over Q by plain Gauss–Jordan elimination on rationals.
pub fn rank_q(rows: &[Vec<num_rational::BigRational>]) -> usize {
    use num_traits::Zero;
    let mut a = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}
