//! Small integer utilities shared by the p-adic and lattice layers.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `p^k` as a big integer.
pub fn pow_u(p: u64, k: u32) -> BigUint {
    num_traits::pow(BigUint::from(p), k as usize)
}

pub fn pow_i(p: u64, k: u32) -> BigInt {
    BigInt::from(pow_u(p, k))
}

/// Splits off the p-part of a nonzero integer: returns `(v, m)` with `n = p^v * m`, `p ∤ m`.
pub fn split_p(n: &BigInt, p: u64) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero integer.
pub fn val_p(n: &BigInt, p: u64) -> u32 {
    split_p(n, p).0
}

pub fn val_p_u64(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n != 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Non-negative residue of `a` modulo `m`.
pub fn mod_floor(a: &BigInt, m: &BigUint) -> BigUint {
    let mi = BigInt::from(m.clone());
    let r = a.mod_floor(&mi);
    r.to_biguint().expect("mod_floor is non-negative")
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigUint) -> Option<BigUint> {
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let mi = BigInt::from(m.clone());
    let a = a.mod_floor(&mi);
    let ext = a.extended_gcd(&mi);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(mod_floor(&ext.x, m))
}

/// `floor(log_p(k))` for `k >= 1`.
pub fn floor_log(k: u64, p: u64) -> u32 {
    let mut e = 0;
    let mut acc = p;
    while acc <= k {
        e += 1;
        match acc.checked_mul(p) {
            Some(next) => acc = next,
            None => break,
        }
    }
    e
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin, exact for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Pollard–Brent rho. Returns a nontrivial factor of composite odd `n`.
fn rho(n: u64) -> Option<u64> {
    for c in 1..64u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        let mut steps = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
            steps += 1;
            if steps > 1 << 22 {
                break;
            }
        }
        if d != 1 && d != n {
            return Some(d);
        }
    }
    None
}

/// Fully factors a 64-bit integer into primes (unsorted, with multiplicity).
pub fn factor_u64(n: u64, out: &mut Vec<u64>) -> bool {
    if n == 1 {
        return true;
    }
    if is_prime_u64(n) {
        out.push(n);
        return true;
    }
    if n.is_multiple_of(2) {
        out.push(2);
        return factor_u64(n / 2, out);
    }
    match rho(n) {
        Some(d) => factor_u64(d, out) && factor_u64(n / d, out),
        None => false,
    }
}

/// Legendre symbol `(a / p)` for odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn to_u64(n: &BigInt) -> Option<u64> {
    if n.sign() == Sign::Minus {
        None
    } else {
        n.to_u64()
    }
}

pub fn abs_to_biguint(n: &BigInt) -> BigUint {
    n.abs().to_biguint().expect("absolute value is non-negative")
}

pub fn lcm_big(a: &BigUint, b: &BigUint) -> BigUint {
    a.lcm(b)
}
