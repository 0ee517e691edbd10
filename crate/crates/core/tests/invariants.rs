use num_bigint::BigInt;
use num_rational::BigRational;
use padic_closure::closure::{
    additive_generators, d_bracket, Component, Coordinate, Generator, GroupSpec,
};
use padic_closure::lattice::{gamma_rank, ExponentMatrix};
use padic_closure::padic::{unit_log, PadicScalar};
use padic_closure::search::{search_d_upper, SearchPolicy};
use proptest::prelude::*;

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn unit_prime_to(p: i64) -> impl Strategy<Value = (i64, i64)> {
    (1i64..500, 1i64..500).prop_filter("prime to p", move |(a, b)| a % p != 0 && b % p != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_log_is_a_homomorphism((a, b) in unit_prime_to(7), (c, d) in unit_prime_to(7)) {
        let n = 16;
        let u = PadicScalar::from_rational(&rational(a, b), 7, n).unwrap();
        let v = PadicScalar::from_rational(&rational(c, d), 7, n).unwrap();
        let lhs = unit_log(&(&u * &v)).unwrap();
        let rhs = &unit_log(&u).unwrap() + &unit_log(&v).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn split_torus_brackets_are_ordered(
        rows in proptest::collection::vec(proptest::collection::vec(1i64..=30, 2), 1..=3)
    ) {
        let spec = GroupSpec::new(vec![Component::Multiplicative; 2]).unwrap();
        let p = 31;
        let gens: Vec<Generator> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Coordinate::Scalar(rational(x, 1))).collect())
            .collect();
        let b = d_bracket(&spec, &gens, p, 12, &SearchPolicy::with_box(1)).unwrap();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let rk = gamma_rank(&ExponentMatrix::from_i64(2, &refs).unwrap());
        prop_assert!(b.lo <= b.hi && b.hi <= rk);
    }

    #[test]
    fn search_bound_ignores_powers(
        rows in proptest::collection::vec(proptest::collection::vec(-12i64..=12, 3), 1..=3),
        m in 2i64..=3,
    ) {
        let rows: Vec<Vec<i64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| if x == 0 { 1 } else { x }).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let e = ExponentMatrix::from_i64(3, &refs).unwrap();
        let policy = SearchPolicy::with_box(1);
        let a = search_d_upper(&e, &policy).unwrap();
        let b = search_d_upper(&e.power(m), &policy).unwrap();
        prop_assert_eq!(a.bound, b.bound);
        prop_assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn vector_groups_are_exact(
        rows in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 3), 1..=4)
    ) {
        let spec = GroupSpec::new(vec![Component::Additive; 3]).unwrap();
        let gens = additive_generators(&rows);
        let b = d_bracket(&spec, &gens, 5, 10, &SearchPolicy::default()).unwrap();
        prop_assert!(b.certified);
        prop_assert_eq!(b.lo, b.hi);
    }
}
