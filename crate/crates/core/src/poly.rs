//! Integer and rational polynomials: discriminants, Sturm sequences,
//! irreducibility certificates, and exact arithmetic in `Q[x]/(f)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::fp_poly;
use crate::linalg;

/// Integer polynomial, coefficients low to high.
pub type IntPoly = Vec<BigInt>;
pub type RatPoly = Vec<BigRational>;

pub fn int_poly(coeffs: &[i64]) -> IntPoly {
    coeffs.iter().map(|&c| BigInt::from(c)).collect()
}

fn trim_rat(mut a: RatPoly) -> RatPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

pub fn to_rat(f: &[BigInt]) -> RatPoly {
    trim_rat(f.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

pub fn format_poly(f: &[BigInt]) -> String {
    let mut terms = vec![];
    for (i, c) in f.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{i}"),
        };
        let mag = c.abs();
        let body = if mag.is_one() && i > 0 {
            mono
        } else if i > 0 {
            format!("{mag}*{mono}")
        } else {
            mag.to_string()
        };
        let sign = if c.is_negative() { "-" } else { "+" };
        if terms.is_empty() {
            terms.push(if c.is_negative() { format!("-{body}") } else { body });
        } else {
            terms.push(format!("{sign} {body}"));
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" ")
    }
}

/// Validates a monic integer polynomial of degree >= 1.
pub fn check_monic(f: &[BigInt]) -> Result<()> {
    if f.len() < 2 {
        return Err(Error::InvalidPolynomial(format!(
            "{} must have degree >= 1",
            format_poly(f)
        )));
    }
    if !f.last().unwrap().is_one() {
        return Err(Error::InvalidPolynomial(format!(
            "{} must be monic",
            format_poly(f)
        )));
    }
    Ok(())
}

pub fn eval_rat(f: &[BigRational], x: &BigRational) -> BigRational {
    f.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn derivative_rat(f: &[BigRational]) -> RatPoly {
    trim_rat(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn rem_rat(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let c = r.last().unwrap() / b.last().unwrap();
        let shift = r.len() - 1 - db;
        for (j, bj) in b.iter().enumerate() {
            let v = &r[shift + j] - &c * bj;
            r[shift + j] = v;
        }
        r.pop();
        r = trim_rat(r);
    }
    trim_rat(r)
}

fn gcd_rat(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    let (mut x, mut y) = (trim_rat(a.to_vec()), trim_rat(b.to_vec()));
    while !y.is_empty() {
        let r = rem_rat(&x, &y);
        x = y;
        y = r;
    }
    x
}

/// Resultant-based discriminant of a monic polynomial:
/// `disc(f) = (-1)^{n(n-1)/2} Res(f, f')`.
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    if n == 1 {
        return BigInt::one();
    }
    let df: IntPoly = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    // Sylvester matrix of f (degree n) and f' (degree n-1): size 2n-1.
    let size = 2 * n - 1;
    let mut syl = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n - 1 {
        for (j, c) in f.iter().rev().enumerate() {
            syl[i][i + j] = c.clone();
        }
    }
    for i in 0..n {
        for (j, c) in df.iter().rev().enumerate() {
            syl[n - 1 + i][i + j] = c.clone();
        }
    }
    let res = linalg::bareiss_det(&syl);
    if (n * (n - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

/// Number of real roots (r1) and complex-conjugate pairs (r2) by Sturm's theorem.
pub fn real_root_count(f: &[BigInt]) -> Result<(usize, usize)> {
    let f0 = to_rat(f);
    let n = f0.len() - 1;
    let mut seq = vec![f0.clone(), derivative_rat(&f0)];
    loop {
        let k = seq.len();
        if seq[k - 1].is_empty() {
            seq.pop();
            break;
        }
        let r = rem_rat(&seq[k - 2], &seq[k - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    if seq.last().map_or(0, |g| g.len() - 1) > 0 {
        return Err(Error::NotSquarefree(format_poly(f)));
    }
    let variations = |signs: Vec<i32>| {
        let nz: Vec<i32> = signs.into_iter().filter(|&s| s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let sign = |c: &BigRational| if c.is_positive() { 1 } else if c.is_negative() { -1 } else { 0 };
    let at_pos: Vec<i32> = seq.iter().map(|g| sign(g.last().unwrap())).collect();
    let at_neg: Vec<i32> = seq
        .iter()
        .map(|g| {
            let s = sign(g.last().unwrap());
            if (g.len() - 1) % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    let r1 = variations(at_neg) - variations(at_pos);
    Ok((r1, (n - r1) / 2))
}

pub fn is_squarefree(f: &[BigInt]) -> bool {
    let fr = to_rat(f);
    gcd_rat(&fr, &derivative_rat(&fr)).len() == 1
}

/// Integer roots of a monic integer polynomial (all its rational roots).
pub fn rational_roots(f: &[BigInt]) -> Result<Vec<BigInt>> {
    let fr = to_rat(f);
    let mut roots = vec![];
    let lowest = f.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if lowest > 0 {
        roots.push(BigInt::zero());
    }
    let c0 = f[lowest].abs();
    let c0 = c0
        .to_u64()
        .ok_or_else(|| Error::InvalidPolynomial("constant term too large to enumerate divisors".into()))?;
    let mut primes = vec![];
    if !arith::factor_u64(c0, &mut primes) {
        return Err(Error::IncompleteFactorization(c0.to_string()));
    }
    primes.sort_unstable();
    let mut divisors: Vec<u64> = vec![1];
    let mut i = 0;
    while i < primes.len() {
        let q = primes[i];
        let mut e = 0;
        while i < primes.len() && primes[i] == q {
            e += 1;
            i += 1;
        }
        let mut next = vec![];
        for &d in &divisors {
            let mut m = d;
            for _ in 0..=e {
                next.push(m);
                m *= q;
            }
        }
        divisors = next;
    }
    divisors.sort_unstable();
    for d in divisors {
        for cand in [BigInt::from(d), -BigInt::from(d)] {
            if eval_rat(&fr, &BigRational::from_integer(cand.clone())).is_zero() {
                roots.push(cand);
            }
        }
    }
    Ok(roots)
}

/// Proves irreducibility over Q of a monic squarefree integer polynomial.
///
/// Degree <= 3 needs only the rational-root test. Above that, the possible
/// degrees of a rational factor are intersected with the subset sums of
/// factor degrees modulo successive good primes until only the trivial
/// degrees remain.
pub fn certify_irreducible(f: &[BigInt]) -> Result<()> {
    check_monic(f)?;
    let n = f.len() - 1;
    if n == 1 {
        return Ok(());
    }
    if !is_squarefree(f) {
        return Err(Error::Reducible(format!("{} has a repeated factor", format_poly(f))));
    }
    if let Some(r) = rational_roots(f)?.first() {
        return Err(Error::Reducible(format!("{} has the rational root {r}", format_poly(f))));
    }
    if n <= 3 {
        return Ok(());
    }
    let disc = discriminant(f);
    let mut possible: Vec<bool> = (0..=n).map(|d| d >= 2 && d <= n - 2).collect();
    let mut q = 2u64;
    let mut tried = 0;
    while tried < 200 {
        q += 1;
        if !arith::is_prime_u64(q) || (&disc % BigInt::from(q)).is_zero() {
            continue;
        }
        tried += 1;
        let fq: fp_poly::FpPoly = f
            .iter()
            .map(|c| arith::mod_floor(c, &q.into()).to_u64().unwrap())
            .collect();
        let degs = fp_poly::factor_degrees(&fp_poly::trim(fq), q);
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in degs {
            for s in (d..=n).rev() {
                if sums[s - d] {
                    sums[s] = true;
                }
            }
        }
        for d in 0..=n {
            possible[d] &= sums[d];
        }
        if !possible.iter().any(|&b| b) {
            return Ok(());
        }
    }
    Err(Error::IrreducibilityUnproven(format_poly(f)))
}

/// `a * b mod f` with exact rational coefficients; `f` monic.
pub fn mul_mod(a: &[BigRational], b: &[BigRational], f: &[BigInt]) -> RatPoly {
    let n = f.len() - 1;
    let mut prod = vec![BigRational::zero(); (a.len() + b.len()).max(1)];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    reduce_mod(prod, f, n)
}

fn reduce_mod(mut prod: RatPoly, f: &[BigInt], n: usize) -> RatPoly {
    for k in (n..prod.len()).rev() {
        let c = std::mem::replace(&mut prod[k], BigRational::zero());
        if c.is_zero() {
            continue;
        }
        for (i, fi) in f.iter().take(n).enumerate() {
            prod[k - n + i] -= &c * BigRational::from_integer(fi.clone());
        }
    }
    prod.resize(n, BigRational::zero());
    prod
}

pub fn pow_mod(a: &[BigRational], e: u64, f: &[BigInt]) -> RatPoly {
    let n = f.len() - 1;
    let mut one = vec![BigRational::zero(); n];
    one[0] = BigRational::one();
    let mut result = one;
    let mut base = reduce_mod(a.to_vec(), f, n);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &base, f);
        }
        base = mul_mod(&base, &base, f);
        e >>= 1;
    }
    result
}

/// Matrix of multiplication by `u` on the power basis of `Z[x]/(f)`;
/// column j holds the coordinates of `u * x^j`.
pub fn multiplication_matrix(u: &[BigInt], f: &[BigInt]) -> linalg::IntMatrix {
    let n = f.len() - 1;
    let ur: RatPoly = u.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let mut cols = vec![];
    for j in 0..n {
        let mut xj = vec![BigRational::zero(); j + 1];
        xj[j] = BigRational::one();
        cols.push(mul_mod(&ur, &xj, f));
    }
    (0..n)
        .map(|i| (0..n).map(|j| cols[j][i].to_integer()).collect())
        .collect()
}

/// Norm `N_{K/Q}(u)` as the determinant of the multiplication matrix.
pub fn norm(u: &[BigInt], f: &[BigInt]) -> BigInt {
    linalg::bareiss_det(&multiplication_matrix(u, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&int_poly(&[-2, 0, 1])), BigInt::from(8));
        assert_eq!(discriminant(&int_poly(&[-1, -1, 1])), BigInt::from(5));
        assert_eq!(discriminant(&int_poly(&[-1, -1, 0, 1])), BigInt::from(-23));
        assert_eq!(discriminant(&int_poly(&[1, 0, 0, 0, 1])), BigInt::from(256));
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(real_root_count(&int_poly(&[-2, 0, 1])).unwrap(), (2, 0));
        assert_eq!(real_root_count(&int_poly(&[1, 0, 1])).unwrap(), (0, 1));
        assert_eq!(real_root_count(&int_poly(&[-1, -1, 0, 1])).unwrap(), (1, 1));
        assert_eq!(real_root_count(&int_poly(&[-2, 0, 0, 1])).unwrap(), (1, 1));
        assert!(matches!(
            real_root_count(&int_poly(&[1, 2, 1])),
            Err(Error::NotSquarefree(_))
        ));
    }

    #[test]
    fn irreducibility() {
        certify_irreducible(&int_poly(&[-2, 0, 1])).unwrap();
        certify_irreducible(&int_poly(&[-1, -1, 0, 1])).unwrap();
        certify_irreducible(&int_poly(&[-2, 0, 0, 0, 1])).unwrap();
        assert!(matches!(
            certify_irreducible(&int_poly(&[-1, 0, 1])),
            Err(Error::Reducible(_))
        ));
        // (x^2 - 2)(x^2 - 3): no rational roots, splits into quadratics.
        assert!(certify_irreducible(&int_poly(&[6, 0, -5, 0, 1])).is_err());
    }

    #[test]
    fn norms() {
        let f = int_poly(&[-1, -1, 1]);
        assert_eq!(norm(&int_poly(&[0, 1]), &f), BigInt::from(-1));
        assert_eq!(norm(&int_poly(&[2]), &f), BigInt::from(4));
        assert_eq!(norm(&int_poly(&[1, 1]), &int_poly(&[-2, 0, 1])), BigInt::from(-1));
    }

    #[test]
    fn formatting() {
        assert_eq!(format_poly(&int_poly(&[-2, 0, 1])), "x^2 - 2");
        assert_eq!(format_poly(&int_poly(&[-1, -1, 0, 1])), "x^3 - x - 1");
    }
}
