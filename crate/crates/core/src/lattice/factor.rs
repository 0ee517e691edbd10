use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::SupportVector;
use crate::arith;
use crate::error::{Error, Result};

pub const DEFAULT_TRIAL_BOUND: u64 = 100_000;

fn factor_natural(n: &BigUint, bound: u64, out: &mut BTreeMap<u64, i64>, sign: i64) -> Result<()> {
    let mut rest = n.clone();
    let mut d = 2u64;
    while d <= bound {
        let db = BigUint::from(d);
        if &db * &db > rest {
            break;
        }
        while (&rest % &db).is_zero() {
            rest /= &db;
            *out.entry(d).or_insert(0) += sign;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Ok(());
    }
    if let Some(small) = rest.to_u64() {
        let mut primes = vec![];
        if !arith::factor_u64(small, &mut primes) {
            return Err(Error::IncompleteFactorization(small.to_string()));
        }
        for q in primes {
            *out.entry(q).or_insert(0) += sign;
        }
        return Ok(());
    }
    // No factor up to `bound`: the cofactor is prime if it is below bound².
    let b = BigUint::from(bound);
    if rest < &b * &b {
        return Err(Error::IncompleteFactorization(format!(
            "{rest} (prime beyond 64-bit range)"
        )));
    }
    Err(Error::IncompleteFactorization(rest.to_string()))
}

/// Complete factorization of a nonzero rational: trial division up to
/// `bound`, then Pollard rho with deterministic Miller–Rabin on 64-bit
/// cofactors. Anything left over is a hard error.
pub fn factor_rational(q: &BigRational, bound: u64) -> Result<SupportVector> {
    if q.is_zero() {
        return Err(Error::InvalidInput("cannot factor zero".into()));
    }
    let sign = if q.is_negative() { -1 } else { 1 };
    let mut exps = BTreeMap::new();
    factor_natural(&arith::abs_to_biguint(q.numer()), bound, &mut exps, 1)?;
    factor_natural(&arith::abs_to_biguint(q.denom()), bound, &mut exps, -1)?;
    exps.retain(|_, e| *e != 0);
    Ok(SupportVector::new(sign, exps))
}

pub fn factor_integer(n: i64) -> Result<SupportVector> {
    factor_rational(&BigRational::from_integer(BigInt::from(n)), DEFAULT_TRIAL_BOUND)
}

/// Reassembles the rational from its factorization.
pub fn support_to_rational(v: &SupportVector) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (&q, &e) in v.exps() {
        let pw = num_traits::pow(BigInt::from(q), e.unsigned_abs() as usize);
        if e > 0 {
            num *= pw;
        } else {
            den *= pw;
        }
    }
    let g = num.gcd(&den);
    BigRational::new(BigInt::from(v.sign()) * num / &g, den / g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn examples() {
        let one = factor_rational(&q(1, 1), 100).unwrap();
        assert_eq!(one.sign(), 1);
        assert!(one.exps().is_empty());

        let v = factor_rational(&q(-12, 5), 100).unwrap();
        assert_eq!(v.sign(), -1);
        assert_eq!(v.exps().iter().map(|(&a, &b)| (a, b)).collect::<Vec<_>>(), vec![(2, 2), (3, 1), (5, -1)]);

        let v = factor_rational(&q(1001, 1), 100).unwrap();
        assert_eq!(v.exps().iter().map(|(&a, &b)| (a, b)).collect::<Vec<_>>(), vec![(7, 1), (11, 1), (13, 1)]);
    }

    #[test]
    fn trial_division_oracle_agrees() {
        for n in 2i64..3000 {
            let v = factor_integer(n).unwrap();
            let mut m = n;
            let mut expected = BTreeMap::new();
            let mut d = 2;
            while m > 1 {
                while m % d == 0 {
                    *expected.entry(d as u64).or_insert(0i64) += 1;
                    m /= d;
                }
                d += 1;
            }
            assert_eq!(v.exps(), &expected, "n = {n}");
            assert_eq!(support_to_rational(&v), q(n, 1));
        }
    }

    #[test]
    fn large_semiprime_via_rho() {
        let n = BigRational::from_integer(BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64));
        let v = factor_rational(&n, 1000).unwrap();
        assert_eq!(v.exps().len(), 2);
    }

    #[test]
    fn beyond_64_bits_is_an_error() {
        // (2^61 - 1) * (2^89 - 1): both prime, product far outside u64.
        let a = (BigInt::one() << 61) - 1;
        let b = (BigInt::one() << 89) - 1;
        let r = factor_rational(&BigRational::from_integer(a * b), 1000);
        assert!(matches!(r, Err(Error::IncompleteFactorization(_))));
    }
}
