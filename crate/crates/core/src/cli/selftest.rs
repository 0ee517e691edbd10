//! Built-in smoke checks with known answers.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::closure::{d_bracket, Component, Coordinate, GroupSpec, Witness};
use crate::elliptic::{count_points_mod_p, elliptic_log, CurveSpec, RationalPoint};
use crate::error::Result;
use crate::lattice::ExponentMatrix;
use crate::number_field::{leopoldt_check, FieldSpec, Verdict};
use crate::padic::PadicScalar;
use crate::poly::int_poly;
use crate::search::{search_d_upper, SearchPolicy};

fn q(n: i64) -> Coordinate {
    Coordinate::Scalar(BigRational::from_integer(BigInt::from(n)))
}

fn inverse_of_three() -> Result<bool> {
    let x = PadicScalar::from_rational(
        &BigRational::new(BigInt::from(1), BigInt::from(3)),
        5,
        4,
    )?;
    Ok(x.unit() == Some(&BigUint::from(417u32)))
}

fn split_torus_bracket() -> Result<bool> {
    let spec = GroupSpec::new(vec![Component::Multiplicative; 2])?;
    let gens = vec![vec![q(2), q(1)], vec![q(3), q(1)], vec![q(6), q(5)]];
    let b = d_bracket(&spec, &gens, 7, 20, &SearchPolicy::with_box(1))?;
    Ok(b.lo == 2
        && b.hi == 2
        && b.certified
        && b.witness == Witness::Subtorus { basis: vec![vec![1, 0]] })
}

fn diagonal_tie() -> Result<bool> {
    let m = ExponentMatrix::from_i64(2, &[&[2, 3], &[3, 2]])?;
    let r = search_d_upper(&m, &SearchPolicy::default())?;
    Ok(r.bound == 2 && r.witness.dim() == 0)
}

fn leopoldt_golden_ratio() -> Result<bool> {
    let f = FieldSpec::new(int_poly(&[-1, -1, 1]))?;
    let r = leopoldt_check(&f, &[int_poly(&[0, 1])], 7, 20)?;
    Ok(r.verdict == Verdict::Certified { rank: 1 })
}

fn elliptic_rank_one() -> Result<bool> {
    let e = CurveSpec::from_i64(0, -2)?;
    let pt = RationalPoint::from_i64(&e, 3, 5)?;
    let count = count_points_mod_p(&e, 5)?;
    let log = elliptic_log(&e, &pt, 5, 10)?;
    Ok(count == 6 && log.is_provably_nonzero())
}

type Check = (&'static str, fn() -> Result<bool>);

/// Named checks and whether each passed (an error counts as a failure).
pub fn run_selftest() -> Vec<(&'static str, std::result::Result<bool, String>)> {
    let checks: [Check; 5] = [
        ("padic: 1/3 in Z_5 mod 5^4 has unit 417", inverse_of_three),
        ("dbracket: <(2,1),(3,1),(6,5)> at p=7 is (2,2) on e1", split_torus_bracket),
        ("d-search: <(2,3),(3,2)> ties to the zero lattice", diagonal_tie),
        ("leopoldt: x^2-x-1, unit x, p=7 certified", leopoldt_golden_ratio),
        ("elliptic: y^2=x^3-2, (3,5) has nonzero 5-adic log", elliptic_rank_one),
    ];
    checks
        .iter()
        .map(|(name, f)| (*name, f().map_err(|e| e.to_string())))
        .collect()
}
