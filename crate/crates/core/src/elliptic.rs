//! Rational points on `y² = x³ + ax + b` and the p-adic elliptic logarithm.
//!
//! Points are moved into the kernel of reduction by multiplying by
//! `#E(F_p)`, where the formal-group logarithm `λ(z)`, `z = −x/y`,
//! converges; the result is divided back out.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{self, split_p};
use crate::error::{Error, Result};
use crate::padic::{log_series_terms, PadicScalar, DEFAULT_SLACK};

/// Largest order of a rational torsion point (Mazur).
pub const MAX_RATIONAL_TORSION_ORDER: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveSpec {
    a: BigRational,
    b: BigRational,
}

impl CurveSpec {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self> {
        let c = CurveSpec { a, b };
        if c.disc_factor().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    pub fn from_i64(a: i64, b: i64) -> Result<Self> {
        Self::new(rat(a), rat(b))
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// `4a³ + 27b²`; the discriminant is `−16` times this.
    pub fn disc_factor(&self) -> BigRational {
        rat(4) * &self.a * &self.a * &self.a + rat(27) * &self.b * &self.b
    }

    pub fn contains(&self, x: &BigRational, y: &BigRational) -> bool {
        y * y == x * x * x + &self.a * x + &self.b
    }

    /// Good reduction at `p ≥ 5`: `a`, `b` are p-integral and `p ∤ 4a³ + 27b²`.
    pub fn check_good_reduction(&self, p: u64) -> Result<()> {
        if !arith::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 5 {
            return Err(Error::InvalidInput(format!(
                "elliptic curves need p >= 5, got {p}"
            )));
        }
        let pb = BigInt::from(p);
        let d = self.disc_factor();
        let integral = |q: &BigRational| !(q.denom() % &pb).is_zero() || q.is_zero();
        if !integral(&self.a) || !integral(&self.b) || (d.numer() % &pb).is_zero() {
            return Err(Error::BadReduction(p));
        }
        Ok(())
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RationalPoint {
    Infinity,
    Affine { x: BigRational, y: BigRational },
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RationalPoint {
    /// A validated affine point.
    pub fn on_curve(curve: &CurveSpec, x: BigRational, y: BigRational) -> Result<Self> {
        if !curve.contains(&x, &y) {
            return Err(Error::PointNotOnCurve {
                x: x.to_string(),
                y: y.to_string(),
            });
        }
        Ok(RationalPoint::Affine { x, y })
    }

    pub fn from_i64(curve: &CurveSpec, x: i64, y: i64) -> Result<Self> {
        Self::on_curve(curve, rat(x), rat(y))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, RationalPoint::Infinity)
    }

    pub fn neg(&self) -> RationalPoint {
        match self {
            RationalPoint::Infinity => RationalPoint::Infinity,
            RationalPoint::Affine { x, y } => RationalPoint::Affine {
                x: x.clone(),
                y: -y,
            },
        }
    }

    pub fn add(&self, other: &RationalPoint, curve: &CurveSpec) -> RationalPoint {
        let (x1, y1, x2, y2) = match (self, other) {
            (RationalPoint::Infinity, q) => return q.clone(),
            (p, RationalPoint::Infinity) => return p.clone(),
            (RationalPoint::Affine { x: x1, y: y1 }, RationalPoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let slope = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return RationalPoint::Infinity;
            }
            (rat(3) * x1 * x1 + &curve.a) / (rat(2) * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &slope * &slope - x1 - x2;
        let y3 = slope * (x1 - &x3) - y1;
        RationalPoint::Affine { x: x3, y: y3 }
    }

    pub fn double(&self, curve: &CurveSpec) -> RationalPoint {
        self.add(self, curve)
    }

    /// `n·P` by double-and-add; negative `n` negates.
    pub fn mul_by_n(&self, n: i64, curve: &CurveSpec) -> RationalPoint {
        let mut result = RationalPoint::Infinity;
        let mut base = if n < 0 { self.neg() } else { self.clone() };
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = result.add(&base, curve);
            }
            base = base.double(curve);
            k >>= 1;
        }
        result
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPoint::Infinity => write!(f, "O"),
            RationalPoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointOp {
    Add,
    Neg,
    MulByN(i64),
}

/// Group law dispatcher; `Neg` and `MulByN` ignore `q`.
pub fn point_arith(
    curve: &CurveSpec,
    p: &RationalPoint,
    q: &RationalPoint,
    op: PointOp,
) -> RationalPoint {
    match op {
        PointOp::Add => p.add(q, curve),
        PointOp::Neg => p.neg(),
        PointOp::MulByN(n) => p.mul_by_n(n, curve),
    }
}

fn reduce_mod(q: &BigRational, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let num = q.numer().mod_floor(&pb);
    let den = q.denom().mod_floor(&pb);
    let inv = arith::mod_inverse(&den, &BigUint::from(p)).expect("p-integral");
    ((num * BigInt::from(inv)) % &pb).to_u64().expect("reduced residue")
}

/// `#E(F_p)` by direct enumeration, checked against the Hasse bound.
pub fn count_points_mod_p(curve: &CurveSpec, p: u64) -> Result<u64> {
    curve.check_good_reduction(p)?;
    let a = reduce_mod(&curve.a, p) as u128;
    let b = reduce_mod(&curve.b, p) as u128;
    let pp = p as u128;
    let mut count: i64 = 1;
    for x in 0..pp {
        let rhs = ((x * x % pp * x) % pp + a * x % pp + b) % pp;
        count += 1 + arith::legendre(rhs as i64, p) as i64;
    }
    let dev = (count - p as i64 - 1).unsigned_abs();
    if dev * dev > 4 * p {
        return Err(Error::Inconsistent(format!(
            "point count {count} violates the Hasse bound at p = {p}"
        )));
    }
    Ok(count as u64)
}

type SeriesCache = RwLock<HashMap<CurveSpec, Arc<Vec<BigRational>>>>;

fn series_cache() -> &'static SeriesCache {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients `A_0..=A_deg` of `w(z) = z³ + a z w² + b w³`.
pub fn formal_w_series(curve: &CurveSpec, deg: usize) -> Vec<BigRational> {
    let mut w = vec![BigRational::zero(); deg + 1];
    let mut sq = vec![BigRational::zero(); deg + 1];
    if deg < 3 {
        return w;
    }
    w[3] = BigRational::one();
    // sq[m] = Σ_{i+j=m} A_i A_j is complete once A_{m-3} is known.
    for n in 4..=deg {
        let m = n - 1;
        if m >= 6 {
            sq[m] = (3..=m - 3).map(|i| &w[i] * &w[m - i]).sum();
        }
        let cube: BigRational = if n >= 9 {
            (3..=n - 6).map(|i| &w[i] * &sq[n - i]).sum()
        } else {
            BigRational::zero()
        };
        w[n] = &curve.a * &sq[n - 1] + &curve.b * cube;
    }
    w
}

fn compute_log_series(curve: &CurveSpec, terms: usize) -> Vec<BigRational> {
    // u = w / z³ with u_0 = 1; ω = 1 + z u' / (2u).
    let w = formal_w_series(curve, terms + 3);
    let u: Vec<BigRational> = w[3..].to_vec();
    let len = terms;
    let mut inv = vec![BigRational::zero(); len];
    inv[0] = BigRational::one();
    for i in 1..len {
        inv[i] = -(1..=i).map(|j| &u[j] * &inv[i - j]).sum::<BigRational>();
    }
    let zu_prime: Vec<BigRational> = (0..len).map(|i| &u[i] * rat(i as i64)).collect();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut omega = vec![BigRational::zero(); len];
    omega[0] = BigRational::one();
    for i in 1..len {
        let s: BigRational = (1..=i).map(|j| &zu_prime[j] * &inv[i - j]).sum();
        omega[i] = s * &half;
    }
    let mut lambda = vec![BigRational::zero(); terms + 1];
    for k in 1..=terms {
        lambda[k] = &omega[k - 1] / rat(k as i64);
    }
    lambda
}

/// `λ(z) = Σ_{k=1}^{T} c_k z^k`, returned as `[0, c_1, …, c_T]`.
pub fn formal_log_series(curve: &CurveSpec, terms: usize) -> Vec<BigRational> {
    assert!(terms >= 1, "at least one term");
    if let Some(s) = series_cache().read().expect("cache lock").get(curve) {
        if s.len() > terms {
            return s[..=terms].to_vec();
        }
    }
    let s = compute_log_series(curve, terms);
    let mut cache = series_cache().write().expect("cache lock");
    let entry = cache.entry(curve.clone()).or_insert_with(|| Arc::new(vec![]));
    if entry.len() < s.len() {
        *entry = Arc::new(s.clone());
    }
    s
}

/// Whether `n·P = O` for some `n ≤ 12`.
pub fn torsion_test(curve: &CurveSpec, p: &RationalPoint) -> bool {
    let mut q = p.clone();
    for _ in 1..=MAX_RATIONAL_TORSION_ORDER {
        if q.is_infinity() {
            return true;
        }
        q = q.add(p, curve);
    }
    false
}

/// The p-adic valuation of a nonzero rational.
fn rat_valuation(q: &BigRational, p: u64) -> i64 {
    split_p(q.numer(), p).0 as i64 - split_p(q.denom(), p).0 as i64
}

/// `λ(z)` at working precision `abs` for `v_p(z) ≥ 1`.
fn formal_log_at(curve: &CurveSpec, z: &BigRational, p: u64, abs: i64) -> Result<PadicScalar> {
    let v = rat_valuation(z, p);
    debug_assert!(v >= 1);
    let terms = log_series_terms(p, v, abs).max(1) as usize;
    let coeffs = formal_log_series(curve, terms);
    let zp = PadicScalar::from_rational(z, p, abs)?;
    let mut sum = PadicScalar::exact_zero(p);
    let mut power = zp.clone();
    for c in coeffs.iter().skip(1) {
        if !c.is_zero() {
            let term = power.mul_int(c.numer()).div_int(c.denom());
            sum = &sum + &term;
        }
        power = &power * &zp;
    }
    Ok(sum.truncate(abs))
}

/// Elliptic logarithm of a rational point at absolute precision `n`.
///
/// Torsion points (and `O`) give an exact zero.
pub fn elliptic_log(
    curve: &CurveSpec,
    point: &RationalPoint,
    p: u64,
    n: i64,
) -> Result<PadicScalar> {
    if n < 1 {
        return Err(Error::InvalidInput(format!("precision must be at least 1, got {n}")));
    }
    curve.check_good_reduction(p)?;
    if point.is_infinity() {
        return Ok(PadicScalar::exact_zero(p));
    }
    let count = count_points_mod_p(curve, p)?;
    let mut multiplier = BigInt::from(count);
    let mut q = point.mul_by_n(count as i64, curve);
    // Good reduction puts count·P in the kernel of reduction; the extra
    // p-multiples only guard against inputs that slip past that argument.
    for _ in 0..4 {
        let (x, y) = match &q {
            RationalPoint::Infinity => return Ok(PadicScalar::exact_zero(p)),
            RationalPoint::Affine { x, y } => (x, y),
        };
        if y.is_zero() {
            // A nonzero 2-torsion point: its log is zero.
            return Ok(PadicScalar::exact_zero(p));
        }
        let z = -(x / y);
        if rat_valuation(&z, p) >= 1 {
            let working = n + DEFAULT_SLACK + arith::val_p(&multiplier, p) as i64;
            let lam = formal_log_at(curve, &z, p, working)?;
            return Ok(lam.div_int(&multiplier).truncate(n));
        }
        q = q.mul_by_n(p as i64, curve);
        multiplier *= p;
    }
    Err(Error::FormalGroup(format!(
        "{point} did not reach the kernel of reduction at p = {p}"
    )))
}
