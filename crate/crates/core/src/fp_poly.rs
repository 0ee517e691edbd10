//! Dense polynomials over a prime field `F_p`, coefficients low to high.

use num_bigint::BigUint;

pub type FpPoly = Vec<u64>;

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv(a: u64, p: u64) -> u64 {
    // Fermat; p is prime
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    r
}

pub fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(a: &FpPoly) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn from_i64s(coeffs: &[i64], p: u64) -> FpPoly {
    trim(coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
}

pub fn sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

pub fn mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulm(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn div_rem(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = inv(b[db], p);
    let mut r = a.clone();
    if r.len() <= db {
        return (vec![], trim(r));
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = mulm(r[i], lead_inv, p);
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for j in 0..=db {
            let t = mulm(c, b[j], p);
            r[i - db + j] = (r[i - db + j] + p - t) % p;
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    div_rem(a, b, p).1
}

pub fn monic(a: &FpPoly, p: u64) -> FpPoly {
    match a.last() {
        None => vec![],
        Some(&l) => {
            let li = inv(l, p);
            a.iter().map(|&c| mulm(c, li, p)).collect()
        }
    }
}

pub fn gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn derivative(a: &FpPoly, p: u64) -> FpPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulm(c, i as u64 % p, p))
            .collect(),
    )
}

pub fn is_squarefree(f: &FpPoly, p: u64) -> bool {
    degree(&gcd(f, &derivative(f, p), p)) == Some(0)
}

pub fn pow_mod(base: &FpPoly, e: &BigUint, m: &FpPoly, p: u64) -> FpPoly {
    let mut result: FpPoly = vec![1];
    let b = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        result = rem(&mul(&result, &result, p), m, p);
        if e.bit(i) {
            result = rem(&mul(&result, &b, p), m, p);
        }
    }
    rem(&result, m, p)
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inverse_mod(a: &FpPoly, m: &FpPoly, p: u64) -> Option<FpPoly> {
    let (mut r0, mut r1) = (m.clone(), rem(a, m, p));
    let (mut s0, mut s1): (FpPoly, FpPoly) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = inv(r0[0], p);
    Some(rem(&s0.iter().map(|&x| mulm(x, c, p)).collect(), m, p))
}

/// Degrees of the irreducible factors of a squarefree monic `f`, ascending,
/// with multiplicity (distinct-degree splitting via `gcd(x^{p^d} - x, f)`).
pub fn factor_degrees(f: &FpPoly, p: u64) -> Vec<usize> {
    let mut rest = monic(f, p);
    let mut out = vec![];
    let x: FpPoly = vec![0, 1];
    let mut h = x.clone();
    let pb = BigUint::from(p);
    let mut d = 1;
    while degree(&rest).unwrap_or(0) >= 2 * d {
        h = pow_mod(&h, &pb, &rest, p);
        let g = gcd(&sub(&h, &x, p), &rest, p);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 {
            out.extend(std::iter::repeat_n(d, dg / d));
            rest = div_rem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
        }
        d += 1;
    }
    if let Some(dr) = degree(&rest) {
        if dr > 0 {
            out.push(dr);
        }
    }
    out.sort_unstable();
    out
}
