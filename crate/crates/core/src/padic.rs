//! Fixed-precision p-adic scalars with interval semantics.
//!
//! A [`PadicScalar`] is a ball in `Q_p`: the value is known modulo `p^abs`.
//! Every operation returns the smallest ball the inputs guarantee, so a
//! nonzero result is a proof of nonzero-ness. Exact zero is a separate
//! sentinel from "zero at the current precision".

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{self, floor_log, mod_floor, mod_inverse, pow_u, split_p};
use crate::error::{Error, Result};

/// Default number of working digits carried above the requested precision.
pub const DEFAULT_SLACK: i64 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    ExactZero,
    /// Indistinguishable from zero: value ≡ 0 mod p^abs.
    Zero { abs: i64 },
    /// `unit * p^val`, known mod `p^(val + rel)`; `unit` is reduced and coprime to p.
    Value { val: i64, unit: BigUint, rel: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicScalar {
    p: u64,
    kind: Kind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub target_abs: i64,
    pub slack: i64,
}

impl PrecisionPolicy {
    pub fn new(target_abs: i64, slack: i64) -> Result<Self> {
        if target_abs < 1 {
            return Err(Error::InvalidInput(format!(
                "precision must be at least 1, got {target_abs}"
            )));
        }
        if slack < 0 {
            return Err(Error::InvalidInput(format!("slack must be >= 0, got {slack}")));
        }
        Ok(PrecisionPolicy { target_abs, slack })
    }

    pub fn with_default_slack(target_abs: i64) -> Result<Self> {
        Self::new(target_abs, DEFAULT_SLACK)
    }

    /// Precision used for intermediate computation.
    pub fn working(&self) -> i64 {
        self.target_abs + self.slack
    }
}

impl PadicScalar {
    pub fn exact_zero(p: u64) -> Self {
        PadicScalar {
            p,
            kind: Kind::ExactZero,
        }
    }

    /// A value known only to be divisible by `p^abs`.
    pub fn zero_mod(p: u64, abs: i64) -> Self {
        PadicScalar {
            p,
            kind: Kind::Zero { abs },
        }
    }

    /// Image of a nonzero rational, with absolute precision at least `abs`.
    ///
    /// The relative precision is `max(abs - v_p(q), 1)`.
    pub fn from_rational(q: &BigRational, p: u64, abs: i64) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidInput(
                "zero has no unit part; use PadicScalar::exact_zero".into(),
            ));
        }
        let (vn, un) = split_p(q.numer(), p);
        let (vd, ud) = split_p(q.denom(), p);
        let val = vn as i64 - vd as i64;
        let rel = (abs - val).max(1) as u32;
        let modulus = pow_u(p, rel);
        let inv = mod_inverse(&ud, &modulus).expect("denominator unit is invertible");
        let unit = (mod_floor(&un, &modulus) * inv) % &modulus;
        Ok(PadicScalar {
            p,
            kind: Kind::Value { val, unit, rel },
        })
    }

    pub fn from_integer(n: &BigInt, p: u64, abs: i64) -> Result<Self> {
        Self::from_rational(&BigRational::from_integer(n.clone()), p, abs)
    }

    pub fn from_i64(n: i64, p: u64, abs: i64) -> Self {
        if n == 0 {
            return Self::exact_zero(p);
        }
        Self::from_integer(&BigInt::from(n), p, abs).expect("nonzero integer")
    }

    pub fn one(p: u64, abs: i64) -> Self {
        Self::from_i64(1, p, abs)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.kind, Kind::ExactZero)
    }

    /// True for exact zero and for values indistinguishable from zero.
    pub fn is_zero_at_precision(&self) -> bool {
        !self.is_provably_nonzero()
    }

    pub fn is_provably_nonzero(&self) -> bool {
        matches!(self.kind, Kind::Value { .. })
    }

    /// Exact valuation, defined only for provably nonzero values.
    pub fn valuation(&self) -> Option<i64> {
        match self.kind {
            Kind::Value { val, .. } => Some(val),
            _ => None,
        }
    }

    /// A lower bound on the true valuation (`i64::MAX` for exact zero).
    pub fn valuation_lower_bound(&self) -> i64 {
        match self.kind {
            Kind::ExactZero => i64::MAX,
            Kind::Zero { abs } => abs,
            Kind::Value { val, .. } => val,
        }
    }

    /// Absolute precision; `None` means exact.
    pub fn abs_precision(&self) -> Option<i64> {
        match self.kind {
            Kind::ExactZero => None,
            Kind::Zero { abs } => Some(abs),
            Kind::Value { val, rel, .. } => Some(val + rel as i64),
        }
    }

    pub fn rel_precision(&self) -> Option<u32> {
        match self.kind {
            Kind::Value { rel, .. } => Some(rel),
            _ => None,
        }
    }

    pub fn unit(&self) -> Option<&BigUint> {
        match &self.kind {
            Kind::Value { unit, .. } => Some(unit),
            _ => None,
        }
    }

    /// The rational `unit * p^val` (zero for zero values).
    pub fn representative(&self) -> BigRational {
        match &self.kind {
            Kind::Value { val, unit, .. } => {
                let u = BigRational::from_integer(BigInt::from(unit.clone()));
                let pp = BigRational::from_integer(arith::pow_i(self.p, val.unsigned_abs() as u32));
                if *val >= 0 {
                    u * pp
                } else {
                    u / pp
                }
            }
            _ => BigRational::zero(),
        }
    }

    /// Whether the two balls intersect, i.e. the values agree to the lesser precision.
    pub fn agrees_with(&self, other: &PadicScalar) -> bool {
        (self - other).is_zero_at_precision()
    }

    /// Caps the absolute precision at `abs`.
    pub fn truncate(&self, abs: i64) -> PadicScalar {
        let kind = match &self.kind {
            Kind::ExactZero => Kind::ExactZero,
            Kind::Zero { abs: a } => Kind::Zero { abs: (*a).min(abs) },
            Kind::Value { val, unit, rel } => {
                if abs <= *val {
                    Kind::Zero { abs }
                } else {
                    let new_rel = (*rel as i64).min(abs - val) as u32;
                    let unit = if new_rel < *rel {
                        unit % pow_u(self.p, new_rel)
                    } else {
                        unit.clone()
                    };
                    Kind::Value {
                        val: *val,
                        unit,
                        rel: new_rel,
                    }
                }
            }
        };
        PadicScalar { p: self.p, kind }
    }

    fn assert_same_prime(&self, other: &PadicScalar) {
        assert_eq!(
            self.p, other.p,
            "p-adic operands over different primes; use scalar_arith for checked arithmetic"
        );
    }

    fn add_impl(&self, other: &PadicScalar) -> PadicScalar {
        self.assert_same_prime(other);
        let p = self.p;
        match (&self.kind, &other.kind) {
            (Kind::ExactZero, _) => other.clone(),
            (_, Kind::ExactZero) => self.clone(),
            (Kind::Zero { abs }, _) => other.truncate(*abs),
            (_, Kind::Zero { abs }) => self.truncate(*abs),
            (
                Kind::Value {
                    val: va,
                    unit: ua,
                    rel: ra,
                },
                Kind::Value {
                    val: vb,
                    unit: ub,
                    rel: rb,
                },
            ) => {
                let abs = (va + *ra as i64).min(vb + *rb as i64);
                let v = (*va).min(*vb);
                if v >= abs {
                    return PadicScalar::zero_mod(p, abs);
                }
                let width = (abs - v) as u32;
                let modulus = pow_u(p, width);
                let shifted = |u: &BigUint, vu: i64| {
                    let s = (vu - v) as u32;
                    if s >= width {
                        BigUint::zero()
                    } else {
                        u * pow_u(p, s)
                    }
                };
                let sum = (shifted(ua, *va) + shifted(ub, *vb)) % &modulus;
                if sum.is_zero() {
                    return PadicScalar::zero_mod(p, abs);
                }
                let (w, unit) = split_p(&BigInt::from(sum), p);
                let val = v + w as i64;
                PadicScalar {
                    p,
                    kind: Kind::Value {
                        val,
                        unit: unit.to_biguint().expect("positive"),
                        rel: (abs - val) as u32,
                    },
                }
            }
        }
    }

    fn neg_impl(&self) -> PadicScalar {
        let kind = match &self.kind {
            Kind::Value { val, unit, rel } => Kind::Value {
                val: *val,
                unit: pow_u(self.p, *rel) - unit,
                rel: *rel,
            },
            k => k.clone(),
        };
        PadicScalar { p: self.p, kind }
    }

    fn mul_impl(&self, other: &PadicScalar) -> PadicScalar {
        self.assert_same_prime(other);
        let p = self.p;
        match (&self.kind, &other.kind) {
            (Kind::ExactZero, _) | (_, Kind::ExactZero) => PadicScalar::exact_zero(p),
            (Kind::Zero { abs: a }, Kind::Zero { abs: b }) => PadicScalar::zero_mod(p, a + b),
            (Kind::Zero { abs }, Kind::Value { val, .. })
            | (Kind::Value { val, .. }, Kind::Zero { abs }) => PadicScalar::zero_mod(p, abs + val),
            (
                Kind::Value {
                    val: va,
                    unit: ua,
                    rel: ra,
                },
                Kind::Value {
                    val: vb,
                    unit: ub,
                    rel: rb,
                },
            ) => {
                let rel = (*ra).min(*rb);
                let unit = (ua * ub) % pow_u(p, rel);
                PadicScalar {
                    p,
                    kind: Kind::Value {
                        val: va + vb,
                        unit,
                        rel,
                    },
                }
            }
        }
    }

    /// Division; fails if the divisor is not provably nonzero.
    pub fn checked_div(&self, other: &PadicScalar) -> Result<PadicScalar> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        let p = self.p;
        let (vb, ub, rb) = match &other.kind {
            Kind::ExactZero => {
                return Err(Error::InvalidInput("division by exact zero".into()));
            }
            Kind::Zero { abs } => {
                return Err(Error::PrecisionExhausted(format!(
                    "divisor is indistinguishable from zero modulo {p}^{abs}"
                )));
            }
            Kind::Value { val, unit, rel } => (*val, unit, *rel),
        };
        Ok(match &self.kind {
            Kind::ExactZero => PadicScalar::exact_zero(p),
            Kind::Zero { abs } => PadicScalar::zero_mod(p, abs - vb),
            Kind::Value { val, unit, rel } => {
                let rel = (*rel).min(rb);
                let modulus = pow_u(p, rel);
                let inv = mod_inverse(&BigInt::from(ub.clone()), &modulus)
                    .expect("units are invertible");
                PadicScalar {
                    p,
                    kind: Kind::Value {
                        val: val - vb,
                        unit: (unit * inv) % &modulus,
                        rel,
                    },
                }
            }
        })
    }

    /// Multiplies by an exact nonzero integer (no precision loss beyond the valuation shift).
    pub fn mul_int(&self, k: &BigInt) -> PadicScalar {
        assert!(!k.is_zero(), "mul_int by zero");
        let (vk, uk) = split_p(k, self.p);
        match &self.kind {
            Kind::ExactZero => self.clone(),
            Kind::Zero { abs } => PadicScalar::zero_mod(self.p, abs + vk as i64),
            Kind::Value { val, unit, rel } => {
                let modulus = pow_u(self.p, *rel);
                PadicScalar {
                    p: self.p,
                    kind: Kind::Value {
                        val: val + vk as i64,
                        unit: (unit * mod_floor(&uk, &modulus)) % &modulus,
                        rel: *rel,
                    },
                }
            }
        }
    }

    /// Divides by an exact nonzero integer; the p-part of `k` lowers the valuation.
    pub fn div_int(&self, k: &BigInt) -> PadicScalar {
        assert!(!k.is_zero(), "div_int by zero");
        let (vk, uk) = split_p(k, self.p);
        match &self.kind {
            Kind::ExactZero => self.clone(),
            Kind::Zero { abs } => PadicScalar::zero_mod(self.p, abs - vk as i64),
            Kind::Value { val, unit, rel } => {
                let modulus = pow_u(self.p, *rel);
                let inv = mod_inverse(&uk, &modulus).expect("p-free part is a unit");
                PadicScalar {
                    p: self.p,
                    kind: Kind::Value {
                        val: val - vk as i64,
                        unit: (unit * inv) % &modulus,
                        rel: *rel,
                    },
                }
            }
        }
    }

    pub fn pow(&self, e: &BigUint) -> PadicScalar {
        let mut result: Option<PadicScalar> = None;
        let bits = e.bits();
        for i in (0..bits).rev() {
            if let Some(r) = result.as_mut() {
                *r = &*r * &*r;
            }
            if e.bit(i) {
                result = Some(match result {
                    None => self.clone(),
                    Some(r) => &r * self,
                });
            }
        }
        result.unwrap_or_else(|| match self.kind {
            Kind::Value { rel, .. } => PadicScalar::one(self.p, rel as i64),
            _ => PadicScalar::one(self.p, i64::from(u32::MAX)),
        })
    }

    pub fn pow_u64(&self, e: u64) -> PadicScalar {
        self.pow(&BigUint::from(e))
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::ExactZero => write!(f, "0"),
            Kind::Zero { abs } => write!(f, "O({}^{})", self.p, abs),
            Kind::Value { val, unit, rel } => {
                write!(f, "{}*{}^{} + O({}^{})", unit, self.p, val, self.p, val + *rel as i64)
            }
        }
    }
}

impl Add for &PadicScalar {
    type Output = PadicScalar;
    fn add(self, rhs: &PadicScalar) -> PadicScalar {
        self.add_impl(rhs)
    }
}

impl Sub for &PadicScalar {
    type Output = PadicScalar;
    fn sub(self, rhs: &PadicScalar) -> PadicScalar {
        self.add_impl(&rhs.neg_impl())
    }
}

impl Mul for &PadicScalar {
    type Output = PadicScalar;
    fn mul(self, rhs: &PadicScalar) -> PadicScalar {
        self.mul_impl(rhs)
    }
}

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_impl()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic: rejects mixed primes and unprovable divisors.
pub fn scalar_arith(a: &PadicScalar, b: &PadicScalar, op: ArithOp) -> Result<PadicScalar> {
    if a.p != b.p {
        return Err(Error::PrimeMismatch(a.p, b.p));
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => return a.checked_div(b),
    })
}

/// Smallest valuation at which `log(1 + x)` converges for this prime.
pub fn log_domain_valuation(p: u64) -> i64 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// Number of series terms after which every remaining term `x^k/k` has
/// valuation at least `target`, given `v_p(x) >= v >= 1`.
///
/// `k*v - floor(log_p k)` is nondecreasing in `k`, so one check suffices.
pub fn log_series_terms(p: u64, v: i64, target: i64) -> u64 {
    debug_assert!(v >= 1);
    let mut t: u64 = 0;
    while (t as i64 + 1) * v - (floor_log(t + 1, p) as i64) < target {
        t += 1;
    }
    t
}

/// Raw partial sum `Σ_{k=1}^{terms} (-1)^{k+1} x^k / k`, without tail accounting.
pub fn log_partial_sum(x: &PadicScalar, terms: u64) -> PadicScalar {
    let mut sum = PadicScalar::exact_zero(x.p);
    let mut power = x.clone();
    for k in 1..=terms {
        let term = power.div_int(&BigInt::from(k));
        sum = if k % 2 == 1 { &sum + &term } else { &sum - &term };
        power = &power * x;
    }
    sum
}

/// `log(1 + x)` for `x` in the convergence domain, at the precision of `x`.
pub fn log_one_plus(x: &PadicScalar) -> Result<PadicScalar> {
    let (val, target) = match &x.kind {
        Kind::ExactZero => return Ok(x.clone()),
        // log is an isometry on its convergence domain
        Kind::Zero { abs } => return Ok(x.clone().truncate(*abs)),
        Kind::Value { val, rel, .. } => (*val, val + *rel as i64),
    };
    let required = log_domain_valuation(x.p);
    if val < required {
        return Err(Error::OutsideConvergence {
            valuation: val,
            required,
        });
    }
    let terms = log_series_terms(x.p, val, target);
    Ok(log_partial_sum(x, terms).truncate(target))
}

/// The logarithm on `Z_p^×`, with kernel the roots of unity.
///
/// Torsion is killed by raising to `p - 1` (or squaring when `p = 2`,
/// which costs one digit of precision in the final halving).
pub fn unit_log(u: &PadicScalar) -> Result<PadicScalar> {
    match u.valuation() {
        Some(0) => {}
        Some(v) => return Err(Error::NotAUnit(format!("valuation {v} != 0"))),
        None => return Err(Error::NotAUnit("value is zero at current precision".into())),
    }
    let p = u.p;
    let e = if p == 2 { 2 } else { p - 1 };
    let abs = u.abs_precision().expect("nonzero value");
    let w = u.pow_u64(e);
    let t = &w - &PadicScalar::one(p, abs);
    Ok(log_one_plus(&t)?.div_int(&BigInt::from(e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn s(n: i64, d: i64, p: u64, abs: i64) -> PadicScalar {
        PadicScalar::from_rational(&q(n, d), p, abs).unwrap()
    }

    #[test]
    fn from_rational_examples() {
        let one = s(1, 1, 5, 4);
        assert_eq!(one.valuation(), Some(0));
        assert_eq!(one.unit(), Some(&BigUint::from(1u32)));

        let fifty = s(50, 1, 5, 4);
        assert_eq!(fifty.valuation(), Some(2));
        assert_eq!(fifty.unit(), Some(&BigUint::from(2u32)));
        assert_eq!(fifty.abs_precision(), Some(4));

        let third = s(1, 3, 5, 4);
        assert_eq!(third.valuation(), Some(0));
        assert_eq!(third.unit(), Some(&BigUint::from(417u32)));
        assert!(PadicScalar::from_rational(&q(0, 1), 5, 4).is_err());
    }

    #[test]
    fn cancellation_gives_zero_at_precision() {
        let a = s(1, 1, 5, 6);
        let b = s(-1, 1, 5, 4);
        let z = &a + &b;
        assert!(!z.is_exact_zero());
        assert!(z.is_zero_at_precision());
        assert_eq!(z.abs_precision(), Some(4));
        let e = PadicScalar::exact_zero(5);
        assert!((&e + &e).is_exact_zero());
    }

    #[test]
    fn valuations_add_under_multiplication() {
        let prod = &s(3, 1, 5, 6) * &s(75, 1, 5, 6);
        assert_eq!(prod.valuation(), Some(2));
        assert_eq!(prod.rel_precision(), Some(4));
    }

    #[test]
    fn division_seven_thirds() {
        let r = s(7, 1, 5, 6).checked_div(&s(3, 1, 5, 6)).unwrap();
        let m = BigInt::from(5u32.pow(6));
        let oracle = (BigInt::from(7) * BigInt::from(3).extended_gcd(&m).x).mod_floor(&m);
        assert_eq!(r.unit(), Some(&oracle.to_biguint().unwrap()));
        let z = &s(1, 1, 5, 3) - &s(1, 1, 5, 3);
        assert!(matches!(
            s(1, 1, 5, 3).checked_div(&z),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn precision_rules() {
        let a = s(1, 1, 7, 5);
        let b = s(7, 1, 7, 3);
        assert_eq!((&a + &b).abs_precision(), Some(3));
        assert_eq!((&a * &b).rel_precision(), Some(2));
        assert!(matches!(
            scalar_arith(&a, &s(1, 1, 5, 3), ArithOp::Add),
            Err(Error::PrimeMismatch(7, 5))
        ));
    }

    #[test]
    fn log_domain() {
        assert!(log_one_plus(&PadicScalar::exact_zero(7)).unwrap().is_exact_zero());
        assert!(matches!(
            log_one_plus(&s(2, 1, 2, 10)),
            Err(Error::OutsideConvergence { .. })
        ));
        assert!(matches!(
            log_one_plus(&s(1, 1, 7, 10)),
            Err(Error::OutsideConvergence { .. })
        ));
    }

    /// Oracle: sum the series with exact rationals to many terms, then reduce mod 7^5.
    #[test]
    fn log_of_eight_mod_7_5() {
        let p = 7u64;
        let m = BigInt::from(7i64.pow(5));
        let mut sum = BigRational::zero();
        for k in 1..=40i64 {
            let term = BigRational::new(BigInt::from(7).pow(k as u32), BigInt::from(k));
            sum = if k % 2 == 1 { sum + term } else { sum - term };
        }
        let inv = BigInt::from(sum.denom().clone()).extended_gcd(&m).x;
        let oracle = (sum.numer() * inv).mod_floor(&m);

        let r = log_one_plus(&s(7, 1, p, 5)).unwrap();
        assert_eq!(r.abs_precision(), Some(5));
        let got = (BigInt::from(r.unit().unwrap().clone()) * BigInt::from(7).pow(r.valuation().unwrap() as u32)).mod_floor(&m);
        assert_eq!(got, oracle);
    }

    #[test]
    fn unit_log_torsion_and_scaling() {
        assert!(unit_log(&s(1, 1, 5, 10)).unwrap().is_zero_at_precision());
        assert!(unit_log(&s(-1, 1, 5, 10)).unwrap().is_zero_at_precision());
        let l2 = unit_log(&s(2, 1, 5, 6)).unwrap();
        assert!(l2.is_provably_nonzero());
        // equals log(1 + 15) / 4
        let direct = log_one_plus(&s(15, 1, 5, 6)).unwrap().div_int(&BigInt::from(4));
        assert_eq!(l2, direct);
        let l4 = unit_log(&s(4, 1, 5, 6)).unwrap();
        assert!(l4.agrees_with(&l2.mul_int(&BigInt::from(2))));
        assert!(matches!(unit_log(&s(5, 1, 5, 6)), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn unit_log_two_adic() {
        let l3 = unit_log(&s(3, 1, 2, 20)).unwrap();
        let l9 = unit_log(&s(9, 1, 2, 20)).unwrap();
        assert!(l3.is_provably_nonzero());
        assert_eq!(l3.abs_precision(), Some(19));
        assert!(l9.agrees_with(&l3.mul_int(&BigInt::from(2))));
        assert!(unit_log(&s(-1, 1, 2, 20)).unwrap().is_zero_at_precision());
    }
}
