//! Exact integer linear algebra: fraction-free elimination, Hermite normal
//! form, integer kernels and lattice saturation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

fn ncols(rows: &[Vec<BigInt>]) -> usize {
    rows.first().map_or(0, Vec::len)
}

/// Rank over Q by Bareiss fraction-free elimination.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a: IntMatrix = rows.to_vec();
    let m = a.len();
    let n = ncols(&a);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(piv) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        for i in r + 1..m {
            for j in c + 1..n {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn bareiss_det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Clears denominators row by row.
pub fn integerize(rows: &[Vec<BigRational>]) -> IntMatrix {
    rows.iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect()
}

pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    bareiss_rank(&integerize(rows))
}

/// Brings the first `width` columns to echelon form with unimodular row
/// operations (applied to the full rows). Returns the pivot columns.
fn unimodular_echelon(a: &mut IntMatrix, width: usize) -> Vec<usize> {
    let m = a.len();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..width {
        if r == m {
            break;
        }
        // Fold every lower entry into row r via extended gcd steps.
        for i in r + 1..m {
            if a[i][c].is_zero() {
                continue;
            }
            if a[r][c].is_zero() {
                a.swap(r, i);
                continue;
            }
            let (x, y) = (a[r][c].clone(), a[i][c].clone());
            let e = x.extended_gcd(&y);
            let (xg, yg) = (&x / &e.gcd, &y / &e.gcd);
            for j in 0..a[r].len() {
                let top = &e.x * &a[r][j] + &e.y * &a[i][j];
                let bottom = &xg * &a[i][j] - &yg * &a[r][j];
                a[r][j] = top;
                a[i][j] = bottom;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for v in a[r].iter_mut() {
                *v = -&*v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Row-style Hermite normal form of the row lattice: upper echelon,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> IntMatrix {
    let n = ncols(rows);
    let mut a: IntMatrix = rows.to_vec();
    let pivots = unimodular_echelon(&mut a, n);
    a.truncate(pivots.len());
    for (r, &c) in pivots.iter().enumerate() {
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                for j in 0..n {
                    let v = &a[i][j] - &q * &a[r][j];
                    a[i][j] = v;
                }
            }
        }
    }
    a
}

/// A basis of the integer kernel `{x ∈ Z^n : A x = 0}`; the result is saturated.
pub fn integer_kernel(rows: &[Vec<BigInt>], n: usize) -> IntMatrix {
    let m = rows.len();
    // Row j of [A^T | I_n]; zero-left rows after echelon are kernel vectors.
    let mut aug: IntMatrix = (0..n)
        .map(|j| {
            let mut row: Vec<BigInt> = rows.iter().map(|r| r[j].clone()).collect();
            row.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let rank = unimodular_echelon(&mut aug, m).len();
    aug.into_iter().skip(rank).map(|row| row[m..].to_vec()).collect()
}

/// `(L ⊗ Q) ∩ Z^n` in Hermite normal form.
pub fn saturate(rows: &[Vec<BigInt>], n: usize) -> IntMatrix {
    let annihilator = integer_kernel(rows, n);
    let sat = integer_kernel(&annihilator, n);
    hermite_normal_form(&sat)
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect()
}

pub fn to_int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}
