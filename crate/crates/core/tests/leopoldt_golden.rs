mod common;

use num_bigint::BigInt;
use padic_closure::number_field::{leopoldt_check, FieldSpec, Verdict};
use serde_json::Value;

fn ints(v: &Value) -> Vec<BigInt> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|c| BigInt::from(c.as_i64().unwrap()))
        .collect()
}

#[test]
fn logs_match_the_frozen_oracle_values() {
    let golden = common::read_value(&common::fixture_dir().join("golden/leopoldt_logs.json"));
    let cases = golden["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 14);
    for case in cases {
        let field = FieldSpec::new(ints(&case["field"])).unwrap();
        let units: Vec<_> = case["units"].as_array().unwrap().iter().map(ints).collect();
        let p = case["p"].as_u64().unwrap();
        let digits = case["digits"].as_i64().unwrap();
        let r = leopoldt_check(&field, &units, p, digits).unwrap();
        assert_eq!(r.verdict, Verdict::Certified { rank: field.unit_rank() });
        for (row, want) in r.log_rows.iter().zip(case["logs"].as_array().unwrap()) {
            let got: Vec<String> = row
                .iter()
                .map(|s| common::residue(s, digits).expect("full precision").to_string())
                .collect();
            let want: Vec<String> = want
                .as_array()
                .unwrap()
                .iter()
                .map(|s| s.as_str().unwrap().to_string())
                .collect();
            assert_eq!(got, want, "{} at p = {p}", case["fixture"]);
        }
    }
}

#[test]
fn higher_precision_extends_the_frozen_digits() {
    let f = FieldSpec::new(vec![BigInt::from(-2), BigInt::from(0), BigInt::from(1)]).unwrap();
    let u = vec![BigInt::from(1), BigInt::from(1)];
    let lo = leopoldt_check(&f, std::slice::from_ref(&u), 11, 20).unwrap();
    let hi = leopoldt_check(&f, &[u], 11, 40).unwrap();
    for (a, b) in lo.log_rows[0].iter().zip(&hi.log_rows[0]) {
        assert!(a.agrees_with(b));
        assert_eq!(common::residue(a, 20), common::residue(b, 20));
    }
}
