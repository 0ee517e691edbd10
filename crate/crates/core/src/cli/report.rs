//! JSON report assembly. Keys come out sorted (serde_json's default map is
//! ordered), big integers are strings, and nothing depends on thread count.

use serde::Serialize;
use serde_json::{json, Value};

use crate::closure::{Component, Coordinate, DBracket, RankReport};
use crate::elliptic::RationalPoint;
use crate::number_field::{FieldSpec, LeopoldtResult};
use crate::padic::PadicScalar;
use crate::poly::IntPoly;
use crate::properties::PropertyOutcome;

use super::problem::GroupProblem;

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize infallibly")
}

fn int_poly(f: &IntPoly) -> Value {
    Value::Array(f.iter().map(|c| Value::String(c.to_string())).collect())
}

fn component(c: &Component) -> Value {
    match c {
        Component::Additive => json!({"type": "additive"}),
        Component::Multiplicative => json!({"type": "multiplicative"}),
        Component::NumberFieldTorus(f) => json!({"type": "number_field_torus", "f": int_poly(f)}),
        Component::EllipticCurve(e) => json!({
            "type": "elliptic_curve",
            "a": e.a().to_string(),
            "b": e.b().to_string(),
        }),
    }
}

fn coordinate(x: &Coordinate) -> Value {
    match x {
        Coordinate::Scalar(q) => Value::String(q.to_string()),
        Coordinate::Algebra(a) => Value::Array(a.iter().map(|c| Value::String(c.to_string())).collect()),
        Coordinate::Point(RationalPoint::Infinity) => Value::String("O".into()),
        Coordinate::Point(RationalPoint::Affine { x, y }) => json!([x.to_string(), y.to_string()]),
    }
}

/// Normalized echo of a group problem.
pub fn group_input(pr: &GroupProblem) -> Value {
    json!({
        "group": pr.spec.components().iter().map(component).collect::<Vec<_>>(),
        "p": pr.p,
        "generators": pr.generators
            .iter()
            .map(|g| g.iter().map(coordinate).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn scalar(s: &PadicScalar) -> Value {
    if s.is_exact_zero() {
        return json!({"kind": "exact_zero"});
    }
    match (s.valuation(), s.abs_precision()) {
        (Some(v), Some(abs)) => json!({
            "kind": "value",
            "valuation": v,
            "abs_precision": abs,
            "unit": s.unit().map(ToString::to_string),
        }),
        (_, abs) => json!({"kind": "zero", "abs_precision": abs}),
    }
}

pub fn log_profile(rows: &[Vec<PadicScalar>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(scalar).collect()))
            .collect(),
    )
}

pub fn header(command: &str, precision: i64, box_bound: Option<u32>) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("tool".into(), json!({"name": TOOL_NAME, "version": TOOL_VERSION}));
    m.insert("command".into(), Value::String(command.into()));
    m.insert("parameters".into(), json!({"precision": precision, "box": box_bound}));
    m
}

pub fn rank_report(r: &RankReport) -> Value {
    to_value(r)
}

pub fn dbracket(b: &DBracket) -> Value {
    to_value(b)
}

pub fn bracket_verdict(b: &DBracket) -> &'static str {
    if b.certified {
        "CERTIFIED"
    } else {
        "BRACKET"
    }
}

pub fn properties(outcomes: &[PropertyOutcome]) -> Value {
    to_value(&outcomes)
}

pub fn field(f: &FieldSpec) -> Value {
    let (r1, r2) = f.signature();
    json!({
        "f": int_poly(f.f()),
        "signature": [r1, r2],
        "unit_rank": f.unit_rank(),
    })
}

pub fn leopoldt_row(r: &LeopoldtResult) -> Value {
    json!({
        "p": r.p,
        "verdict": to_value(&r.verdict),
        "rank_report": rank_report(&r.rank_report),
        "log_matrix": log_profile(&r.log_rows),
    })
}

pub fn units(us: &[IntPoly]) -> Value {
    Value::Array(us.iter().map(int_poly).collect())
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize infallibly");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn scalar_profiles() {
        assert_eq!(scalar(&PadicScalar::exact_zero(5)), json!({"kind": "exact_zero"}));
        assert_eq!(
            scalar(&PadicScalar::zero_mod(5, 3)),
            json!({"kind": "zero", "abs_precision": 3})
        );
        let x = PadicScalar::from_integer(&BigInt::from(10), 5, 4).unwrap();
        assert_eq!(
            scalar(&x),
            json!({"kind": "value", "valuation": 1, "abs_precision": 4, "unit": "2"})
        );
    }

    #[test]
    fn keys_are_sorted() {
        let s = render(&Value::Object(header("closure", 20, Some(1))));
        let c = s.find("\"command\"").unwrap();
        let p = s.find("\"parameters\"").unwrap();
        let t = s.find("\"tool\"").unwrap();
        assert!(c < p && p < t);
    }
}
