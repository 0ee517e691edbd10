//! intersect_rank against rank–nullity: the kernel of Γ ⊗ Q → X(G)^∨ ⊗ Q / V
//! is (Γ ∩ H_V) ⊗ Q, so its rank is rk Γ minus the rank of the projection.

use num_bigint::BigInt;
use num_rational::BigRational;
use padic_closure::lattice::{enumerate_candidates, intersect_rank, ExponentMatrix, SubspaceCandidate};
use padic_closure::linalg::integer_kernel;
use proptest::prelude::*;

mod common;
use common::rank_q;

/// Exponent rows flattened prime by prime, and their images modulo V.
fn oracle(m: &ExponentMatrix, v: &SubspaceCandidate) -> usize {
    let n = m.n();
    let ann = integer_kernel(v.basis(), n);
    let q = |x: &BigInt| BigRational::from_integer(x.clone());
    let mut flat = vec![];
    let mut proj = vec![];
    for g in m.gens() {
        let mut f = vec![];
        let mut pr = vec![];
        for &prime in m.support() {
            let e: Vec<BigInt> = g.iter().map(|s| BigInt::from(s.exponent(prime))).collect();
            f.extend(e.iter().map(q));
            for a in &ann {
                let dot: BigInt = e.iter().zip(a).map(|(x, y)| x * y).sum();
                pr.push(q(&dot));
            }
        }
        flat.push(f);
        proj.push(pr);
    }
    if flat.first().is_none_or(Vec::is_empty) {
        return 0;
    }
    let proj_rank = if proj[0].is_empty() { 0 } else { rank_q(&proj) };
    rank_q(&flat) - proj_rank
}

const PRIMES: [i64; 4] = [2, 3, 5, 7];

fn build(n: usize, exps: &[Vec<Vec<i64>>]) -> ExponentMatrix {
    let gens: Vec<Vec<i64>> = exps
        .iter()
        .map(|g| {
            g.iter()
                .map(|e| {
                    PRIMES
                        .iter()
                        .zip(e)
                        .fold(1i64, |acc, (p, &k)| acc * p.pow(k as u32))
                })
                .collect()
        })
        .collect();
    let refs: Vec<&[i64]> = gens.iter().map(Vec::as_slice).collect();
    ExponentMatrix::from_i64(n, &refs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn intersect_rank_matches_rank_nullity(
        n in 1usize..=3,
        k in 1usize..=4,
        seed in proptest::collection::vec(0i64..=2, 48),
    ) {
        let exps: Vec<Vec<Vec<i64>>> = (0..k)
            .map(|j| (0..n).map(|i| (0..4).map(|q| seed[(j * 12 + i * 4 + q) % 48]).collect()).collect())
            .collect();
        let m = build(n, &exps);
        for v in enumerate_candidates(&m, 1).unwrap() {
            prop_assert_eq!(intersect_rank(&m, &v).unwrap(), oracle(&m, &v), "V = {}", v);
        }
    }
}

#[test]
fn dependent_generators_are_counted_once() {
    let m = ExponentMatrix::from_i64(2, &[&[2, 3], &[3, 2], &[4, 9]]).unwrap();
    let zero = SubspaceCandidate::zero(2);
    assert_eq!(intersect_rank(&m, &zero).unwrap(), 0);
    assert_eq!(oracle(&m, &zero), 0);
    let full = SubspaceCandidate::full(2);
    assert_eq!(intersect_rank(&m, &full).unwrap(), 2);
}
