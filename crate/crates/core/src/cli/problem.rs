//! Problem files: UTF-8 JSON with a `schema_version` field.
//!
//! Rationals are strings `"a/b"` (plain integers are accepted too),
//! polynomial and algebra coefficients run from the constant term up, and
//! curve points are `[x, y]` or `"O"`.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{Map, Value};

use crate::closure::{Component, Coordinate, Generator, GroupSpec, DEFAULT_PRECISION};
use crate::elliptic::{CurveSpec, RationalPoint};
use crate::error::{Error, Result};
use crate::lattice::DEFAULT_BOX;
use crate::poly::IntPoly;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Debug)]
pub struct GroupProblem {
    pub spec: GroupSpec,
    pub p: u64,
    pub precision: i64,
    pub box_bound: u32,
    pub generators: Vec<Generator>,
}

#[derive(Clone, Debug)]
pub struct LeopoldtProblem {
    pub field: IntPoly,
    pub units: Vec<IntPoly>,
    pub primes: Vec<u64>,
    pub precision: i64,
}

fn err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::parse(location, message)
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_json(&text)
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        err(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn object<'a>(v: &'a Value, at: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(at, "expected an object"))
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(at, "expected an array"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(key, "missing field"))
}

fn check_version(obj: &Map<String, Value>) -> Result<()> {
    match field(obj, "schema_version")?.as_u64() {
        Some(SCHEMA_VERSION) => Ok(()),
        _ => Err(err(
            "schema_version",
            format!("unsupported schema version (expected {SCHEMA_VERSION})"),
        )),
    }
}

fn parse_u64(v: &Value, at: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| err(at, "expected a non-negative integer"))
}

fn optional_u64(obj: &Map<String, Value>, key: &str, default: u64) -> Result<u64> {
    obj.get(key).map_or(Ok(default), |v| parse_u64(v, key))
}

fn parse_bigint(s: &str, at: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| err(at, format!("invalid integer {s:?}")))
}

pub fn parse_rational(v: &Value, at: &str) -> Result<BigRational> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            Ok(BigRational::from_integer(parse_bigint(&n.to_string(), at)?))
        }
        Value::String(s) => {
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (parse_bigint(a, at)?, parse_bigint(b, at)?),
                None => (parse_bigint(s, at)?, BigInt::from(1)),
            };
            if den.is_zero() {
                return Err(err(at, "zero denominator"));
            }
            Ok(BigRational::new(num, den))
        }
        _ => Err(err(at, "expected a rational as \"a/b\" or an integer")),
    }
}

fn parse_integer(v: &Value, at: &str) -> Result<BigInt> {
    let q = parse_rational(v, at)?;
    if !q.is_integer() {
        return Err(err(at, "expected an integer"));
    }
    Ok(q.to_integer())
}

fn parse_int_poly(v: &Value, at: &str) -> Result<IntPoly> {
    array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_integer(c, &format!("{at}[{i}]")))
        .collect()
}

fn parse_component(v: &Value, at: &str) -> Result<Component> {
    if let Some(s) = v.as_str() {
        return match s {
            "additive" => Ok(Component::Additive),
            "multiplicative" => Ok(Component::Multiplicative),
            _ => Err(err(at, format!("unknown component {s:?}"))),
        };
    }
    let obj = object(v, at)?;
    let kind = obj
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| err(format!("{at}.type"), "missing component type"))?;
    match kind {
        "additive" => Ok(Component::Additive),
        "multiplicative" => Ok(Component::Multiplicative),
        "number_field_torus" => {
            let f = obj.get("f").ok_or_else(|| err(format!("{at}.f"), "missing field"))?;
            Ok(Component::NumberFieldTorus(parse_int_poly(f, &format!("{at}.f"))?))
        }
        "elliptic_curve" => {
            let a = obj.get("a").ok_or_else(|| err(format!("{at}.a"), "missing field"))?;
            let b = obj.get("b").ok_or_else(|| err(format!("{at}.b"), "missing field"))?;
            let curve = CurveSpec::new(
                parse_rational(a, &format!("{at}.a"))?,
                parse_rational(b, &format!("{at}.b"))?,
            )?;
            Ok(Component::EllipticCurve(curve))
        }
        _ => Err(err(format!("{at}.type"), format!("unknown component {kind:?}"))),
    }
}

fn parse_coordinate(c: &Component, v: &Value, at: &str) -> Result<Coordinate> {
    match c {
        Component::Additive => Ok(Coordinate::Scalar(parse_rational(v, at)?)),
        Component::Multiplicative => {
            let q = parse_rational(v, at)?;
            if q.is_zero() {
                return Err(err(at, "G_m coordinates must be nonzero"));
            }
            Ok(Coordinate::Scalar(q))
        }
        Component::NumberFieldTorus(_) => {
            let coeffs = array(v, at)?
                .iter()
                .enumerate()
                .map(|(i, c)| parse_rational(c, &format!("{at}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            if coeffs.iter().all(Zero::is_zero) {
                return Err(err(at, "torus coordinates must be nonzero"));
            }
            Ok(Coordinate::Algebra(coeffs))
        }
        Component::EllipticCurve(e) => {
            if v.as_str() == Some("O") {
                return Ok(Coordinate::Point(RationalPoint::Infinity));
            }
            let xy = array(v, at)?;
            if xy.len() != 2 {
                return Err(err(at, "expected [x, y] or \"O\""));
            }
            let x = parse_rational(&xy[0], &format!("{at}[0]"))?;
            let y = parse_rational(&xy[1], &format!("{at}[1]"))?;
            RationalPoint::on_curve(e, x, y)
                .map(Coordinate::Point)
                .map_err(|e| err(at, e.to_string()))
        }
    }
}

fn precision_field(obj: &Map<String, Value>) -> Result<i64> {
    let n = optional_u64(obj, "precision", DEFAULT_PRECISION as u64)?;
    if n == 0 || n > 10_000 {
        return Err(err("precision", "precision must be between 1 and 10000"));
    }
    Ok(n as i64)
}

pub fn parse_group_problem(v: &Value) -> Result<GroupProblem> {
    let obj = object(v, "$")?;
    check_version(obj)?;
    let comps = array(field(obj, "group")?, "group")?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_component(c, &format!("group[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let spec = GroupSpec::new(comps)?;
    let p = parse_u64(field(obj, "p")?, "p")?;
    let precision = precision_field(obj)?;
    let box_bound = optional_u64(obj, "box", DEFAULT_BOX as u64)?;
    if box_bound == 0 || box_bound > 64 {
        return Err(err("box", "box must be between 1 and 64"));
    }
    let generators = array(field(obj, "generators")?, "generators")?
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let at = format!("generators[{j}]");
            let coords = array(g, &at)?;
            if coords.len() != spec.components().len() {
                return Err(err(
                    &at,
                    format!(
                        "expected {} coordinates, got {}",
                        spec.components().len(),
                        coords.len()
                    ),
                ));
            }
            spec.components()
                .iter()
                .zip(coords)
                .enumerate()
                .map(|(i, (c, x))| parse_coordinate(c, x, &format!("{at}[{i}]")))
                .collect()
        })
        .collect::<Result<Vec<Generator>>>()?;
    Ok(GroupProblem {
        spec,
        p,
        precision,
        box_bound: box_bound as u32,
        generators,
    })
}

pub fn parse_leopoldt_problem(v: &Value) -> Result<LeopoldtProblem> {
    let obj = object(v, "$")?;
    check_version(obj)?;
    let field_poly = parse_int_poly(field(obj, "field")?, "field")?;
    let units = array(field(obj, "units")?, "units")?
        .iter()
        .enumerate()
        .map(|(i, u)| parse_int_poly(u, &format!("units[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let primes = array(field(obj, "primes")?, "primes")?
        .iter()
        .enumerate()
        .map(|(i, p)| parse_u64(p, &format!("primes[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    if primes.is_empty() {
        return Err(err("primes", "at least one prime is required"));
    }
    Ok(LeopoldtProblem {
        field: field_poly,
        units,
        primes,
        precision: precision_field(obj)?,
    })
}
