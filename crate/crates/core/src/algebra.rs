//! Arithmetic and logarithm in the étale algebra `A = Q_p[x]/(f)`.
//!
//! For a number field `K = Q[x]/(f)` this is `K ⊗ Q_p`, the Lie algebra of
//! the torus `Res_{K/Q} G_m` over `Q_p`. Nothing here factors `f` over
//! `Q_p`; ranks of log vectors do not see the splitting.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{self, pow_i, pow_u};
use crate::error::{Error, Result};
use crate::fp_poly::{self, FpPoly};
use crate::padic::{log_domain_valuation, log_series_terms, PadicScalar};
use crate::poly::{self, IntPoly};

/// Defining data for `A`: a monic irreducible `f`, an unramified prime, and
/// the working absolute precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraModulus {
    f: IntPoly,
    p: u64,
    precision: i64,
    disc: BigInt,
}

impl AlgebraModulus {
    pub fn new(f: IntPoly, p: u64, precision: i64) -> Result<Self> {
        if !arith::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if precision < 1 {
            return Err(Error::InvalidInput(format!("precision must be >= 1, got {precision}")));
        }
        poly::certify_irreducible(&f)?;
        let disc = poly::discriminant(&f);
        if (&disc % BigInt::from(p)).is_zero() {
            return Err(Error::Ramified {
                p,
                disc: disc.to_string(),
            });
        }
        Ok(AlgebraModulus {
            f,
            p,
            precision,
            disc,
        })
    }

    pub fn f(&self) -> &IntPoly {
        &self.f
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn with_precision(&self, precision: i64) -> Self {
        AlgebraModulus {
            precision,
            ..self.clone()
        }
    }

    fn f_mod_p(&self) -> FpPoly {
        let pb = BigUint::from(self.p);
        fp_poly::trim(
            self.f
                .iter()
                .map(|c| arith::mod_floor(c, &pb).to_u64().unwrap())
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    coeffs: Vec<PadicScalar>,
}

impl AlgebraElement {
    pub fn new(coeffs: Vec<PadicScalar>, m: &AlgebraModulus) -> Result<Self> {
        if coeffs.len() != m.degree() {
            return Err(Error::DimensionMismatch {
                expected: m.degree(),
                got: coeffs.len(),
            });
        }
        if let Some(c) = coeffs.iter().find(|c| c.p() != m.p) {
            return Err(Error::PrimeMismatch(c.p(), m.p));
        }
        Ok(AlgebraElement { coeffs })
    }

    /// Embeds `Σ q_i x^i` at the modulus precision; zero coefficients are exact.
    pub fn from_rationals(q: &[BigRational], m: &AlgebraModulus) -> Result<Self> {
        if q.len() > m.degree() {
            return Err(Error::DimensionMismatch {
                expected: m.degree(),
                got: q.len(),
            });
        }
        let coeffs = (0..m.degree())
            .map(|i| match q.get(i) {
                Some(c) if !c.is_zero() => PadicScalar::from_rational(c, m.p, m.precision),
                _ => Ok(PadicScalar::exact_zero(m.p)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgebraElement { coeffs })
    }

    pub fn from_integers(q: &[BigInt], m: &AlgebraModulus) -> Result<Self> {
        let r: Vec<BigRational> = q.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        Self::from_rationals(&r, m)
    }

    pub fn one(m: &AlgebraModulus) -> Self {
        let mut coeffs = vec![PadicScalar::exact_zero(m.p); m.degree()];
        coeffs[0] = PadicScalar::one(m.p, m.precision);
        AlgebraElement { coeffs }
    }

    pub fn zero(m: &AlgebraModulus) -> Self {
        AlgebraElement {
            coeffs: vec![PadicScalar::exact_zero(m.p); m.degree()],
        }
    }

    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<PadicScalar> {
        self.coeffs
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.coeffs.iter().all(PadicScalar::is_zero_at_precision)
    }

    /// Minimum absolute precision over coefficients (`None` if all exact).
    pub fn abs_precision(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(PadicScalar::abs_precision).min()
    }

    pub fn valuation_lower_bound(&self) -> i64 {
        self.coeffs
            .iter()
            .map(PadicScalar::valuation_lower_bound)
            .min()
            .unwrap_or(i64::MAX)
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn truncate(&self, abs: i64) -> AlgebraElement {
        AlgebraElement {
            coeffs: self.coeffs.iter().map(|c| c.truncate(abs)).collect(),
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> AlgebraElement {
        AlgebraElement {
            coeffs: self.coeffs.iter().map(|c| c.mul_int(k)).collect(),
        }
    }

    pub fn div_int(&self, k: &BigInt) -> AlgebraElement {
        AlgebraElement {
            coeffs: self.coeffs.iter().map(|c| c.div_int(k)).collect(),
        }
    }

    pub fn agrees_with(&self, other: &AlgebraElement) -> bool {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a.agrees_with(b))
    }
}

/// Product reduced modulo `f`, with scalar precision rules.
pub fn algebra_mul(a: &AlgebraElement, b: &AlgebraElement, m: &AlgebraModulus) -> AlgebraElement {
    let n = m.degree();
    let p = m.p;
    let mut prod = vec![PadicScalar::exact_zero(p); 2 * n - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_exact_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if y.is_exact_zero() {
                continue;
            }
            prod[i + j] = &prod[i + j] + &(x * y);
        }
    }
    // x^n = -Σ f_i x^i
    for k in (n..2 * n - 1).rev() {
        let c = std::mem::replace(&mut prod[k], PadicScalar::exact_zero(p));
        if c.is_exact_zero() {
            continue;
        }
        for (i, fi) in m.f.iter().take(n).enumerate() {
            if fi.is_zero() {
                continue;
            }
            prod[k - n + i] = &prod[k - n + i] - &c.mul_int(fi);
        }
    }
    prod.truncate(n);
    AlgebraElement { coeffs: prod }
}

pub fn algebra_pow(a: &AlgebraElement, e: &BigUint, m: &AlgebraModulus) -> AlgebraElement {
    let mut result = AlgebraElement::one(m);
    for i in (0..e.bits()).rev() {
        result = algebra_mul(&result, &result, m);
        if e.bit(i) {
            result = algebra_mul(&result, a, m);
        }
    }
    result
}

/// Integer representatives of the coefficients modulo `p^abs`, for integral elements.
fn integral_residues(a: &AlgebraElement, p: u64, abs: i64) -> Result<Vec<BigInt>> {
    let modulus = pow_i(p, abs as u32);
    a.coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.valuation_lower_bound() < 0 {
                return Err(Error::NotAUnit(format!(
                    "coefficient {i} is not p-integral (valuation {})",
                    c.valuation_lower_bound()
                )));
            }
            Ok(match (c.valuation(), c.unit()) {
                (Some(v), Some(u)) if v < abs => {
                    (BigInt::from(u.clone()) * pow_i(p, v as u32)).mod_floor(&modulus)
                }
                _ => BigInt::zero(),
            })
        })
        .collect()
}

fn residue_poly(a: &AlgebraElement, p: u64) -> Result<FpPoly> {
    let r = integral_residues(a, p, 1)?;
    Ok(fp_poly::trim(r.iter().map(|c| c.to_u64().unwrap()).collect()))
}

/// True iff `a` is integral and its image in `F_p[x]/(f mod p)` is invertible.
pub fn is_unit(a: &AlgebraElement, m: &AlgebraModulus) -> Result<bool> {
    let r = residue_poly(a, m.p)?;
    Ok(fp_poly::inverse_mod(&r, &m.f_mod_p(), m.p).is_some())
}

fn int_mul_mod(a: &[BigInt], b: &[BigInt], f: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
    let n = f.len() - 1;
    let mut prod = vec![BigInt::zero(); 2 * n - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (n..2 * n - 1).rev() {
        let c = std::mem::take(&mut prod[k]);
        for i in 0..n {
            prod[k - n + i] -= &c * &f[i];
        }
    }
    prod.truncate(n);
    prod.into_iter().map(|c| c.mod_floor(modulus)).collect()
}

/// Inverse modulo `(p^N, f)`: extended Euclid over `F_p`, then Newton lifting
/// `b ← b(2 − ab)`, doubling the precision each step.
pub fn algebra_invert(a: &AlgebraElement, m: &AlgebraModulus) -> Result<AlgebraElement> {
    let p = m.p;
    let n = m.degree();
    let abs = a.abs_precision().unwrap_or(m.precision);
    if abs < 1 {
        return Err(Error::PrecisionExhausted("element carries no digits".into()));
    }
    let r = residue_poly(a, p)?;
    let inv0 = fp_poly::inverse_mod(&r, &m.f_mod_p(), p)
        .ok_or_else(|| Error::NotAUnit("residue is not invertible in F_p[x]/(f)".into()))?;
    let a_int = integral_residues(a, p, abs)?;
    let mut b: Vec<BigInt> = (0..n)
        .map(|i| BigInt::from(inv0.get(i).copied().unwrap_or(0)))
        .collect();
    let mut k = 1i64;
    while k < abs {
        k = (2 * k).min(abs);
        let modulus = pow_i(p, k as u32);
        let ab = int_mul_mod(&a_int, &b, &m.f, &modulus);
        let mut two_minus: Vec<BigInt> = ab.iter().map(|c| -c).collect();
        two_minus[0] += BigInt::from(2);
        b = int_mul_mod(&b, &two_minus, &m.f, &modulus);
    }
    let coeffs = b
        .iter()
        .map(|c| {
            if c.is_zero() {
                Ok(PadicScalar::zero_mod(p, abs))
            } else {
                PadicScalar::from_integer(c, p, abs)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AlgebraElement { coeffs })
}

/// `lcm(p^{d_i} − 1)` over the degrees of the irreducible factors of `f mod p`.
/// Every unit `u` of `Z_p[x]/(f)` has `u^M ≡ 1 (mod p)`.
pub fn residue_exponent(m: &AlgebraModulus) -> BigUint {
    let degs = fp_poly::factor_degrees(&m.f_mod_p(), m.p);
    let mut out = BigUint::one();
    let mut seen = vec![];
    for d in degs {
        if seen.contains(&d) {
            continue;
        }
        seen.push(d);
        out = arith::lcm_big(&out, &(pow_u(m.p, d as u32) - BigUint::one()));
    }
    out
}

/// `log(1 + t)` in `A`, for `t` with coefficients in the convergence domain.
fn algebra_log_one_plus(t: &AlgebraElement, m: &AlgebraModulus) -> Result<AlgebraElement> {
    let v = t.valuation_lower_bound();
    let Some(target) = t.abs_precision() else {
        return Ok(t.clone());
    };
    let required = log_domain_valuation(m.p);
    if v < required {
        return Err(Error::OutsideConvergence {
            valuation: v,
            required,
        });
    }
    let v = v.min(target);
    let terms = log_series_terms(m.p, v, target);
    let mut sum = AlgebraElement::zero(m);
    let mut power = t.clone();
    for k in 1..=terms {
        let term = power.div_int(&BigInt::from(k));
        sum = if k % 2 == 1 { sum.add(&term) } else { sum.sub(&term) };
        power = algebra_mul(&power, t, m);
    }
    Ok(sum.truncate(target))
}

/// Lie-algebra coordinates of `log u` for a unit `u` of `Z_p[x]/(f)`.
pub fn algebra_unit_log(u: &AlgebraElement, m: &AlgebraModulus) -> Result<AlgebraElement> {
    if !is_unit(u, m)? {
        return Err(Error::NotAUnit("residue is not invertible in F_p[x]/(f)".into()));
    }
    let mut e = residue_exponent(m);
    if m.p == 2 {
        e *= 2u32;
    }
    let w = algebra_pow(u, &e, m);
    let t = w.sub(&AlgebraElement::one(&m.with_precision(
        w.abs_precision().unwrap_or(m.precision),
    )));
    let log = algebra_log_one_plus(&t, m)?;
    Ok(log.div_int(&BigInt::from(e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::unit_log;
    use crate::poly::int_poly;

    fn modulus(f: &[i64], p: u64, n: i64) -> AlgebraModulus {
        AlgebraModulus::new(int_poly(f), p, n).unwrap()
    }

    fn elt(c: &[i64], m: &AlgebraModulus) -> AlgebraElement {
        AlgebraElement::from_integers(&int_poly(c), m).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let m = modulus(&[-2, 0, 1], 3, 10);
        let x = elt(&[0, 1], &m);
        assert_eq!(algebra_mul(&x, &AlgebraElement::one(&m), &m), x);
        assert!(algebra_mul(&x, &x, &m).agrees_with(&elt(&[2, 0], &m)));
        let one_plus_x = elt(&[1, 1], &m);
        assert!(algebra_mul(&one_plus_x, &one_plus_x, &m).agrees_with(&elt(&[3, 2], &m)));
    }

    #[test]
    fn inversion() {
        let m = modulus(&[-2, 0, 1], 3, 12);
        let x = elt(&[0, 1], &m);
        let xi = algebra_invert(&x, &m).unwrap();
        // x/2
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let expected =
            AlgebraElement::from_rationals(&[BigRational::zero(), half], &m).unwrap();
        assert!(xi.agrees_with(&expected));
        assert!(algebra_mul(&x, &xi, &m).agrees_with(&AlgebraElement::one(&m)));
        assert_eq!(algebra_invert(&AlgebraElement::one(&m), &m).unwrap().coeffs()[0].abs_precision(), Some(12));
        let zero = x.sub(&x);
        assert!(matches!(algebra_invert(&zero, &m), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn residue_exponents() {
        assert_eq!(residue_exponent(&modulus(&[-2, 0, 1], 3, 5)), BigUint::from(8u32));
        assert_eq!(residue_exponent(&modulus(&[-2, 0, 1], 7, 5)), BigUint::from(6u32));
        assert_eq!(residue_exponent(&modulus(&[-1, 1], 5, 5)), BigUint::from(4u32));
    }

    #[test]
    fn ramified_prime_rejected() {
        assert!(matches!(
            AlgebraModulus::new(int_poly(&[-2, 0, 1]), 2, 10),
            Err(Error::Ramified { .. })
        ));
    }

    #[test]
    fn log_torsion_and_homomorphism() {
        let m = modulus(&[-2, 0, 1], 3, 8);
        assert!(algebra_unit_log(&AlgebraElement::one(&m), &m).unwrap().is_zero_at_precision());
        assert!(algebra_unit_log(&elt(&[-1], &m), &m).unwrap().is_zero_at_precision());
        let u = elt(&[1, 1], &m);
        let v = algebra_unit_log(&u, &m).unwrap();
        assert!(!v.is_zero_at_precision());
        let u2 = algebra_mul(&u, &u, &m);
        let v2 = algebra_unit_log(&u2, &m).unwrap();
        assert!(v2.agrees_with(&v.mul_int(&BigInt::from(2))));
    }

    #[test]
    fn degree_one_matches_scalar_log() {
        for (p, c) in [(5u64, 2i64), (7, 3), (11, -4), (3, 2)] {
            let m = modulus(&[-1, 1], p, 12);
            let a = algebra_unit_log(&elt(&[c], &m), &m).unwrap();
            let s = unit_log(&PadicScalar::from_i64(c, p, 12)).unwrap();
            assert_eq!(a.coeffs()[0], s, "p = {p}, c = {c}");
        }
    }

    #[test]
    fn non_unit_rejected() {
        let m = modulus(&[-2, 0, 1], 3, 8);
        assert!(matches!(algebra_unit_log(&elt(&[3, 3], &m), &m), Err(Error::NotAUnit(_))));
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let a = AlgebraElement::from_rationals(&[third], &m).unwrap();
        assert!(matches!(algebra_unit_log(&a, &m), Err(Error::NotAUnit(_))));
    }
}
