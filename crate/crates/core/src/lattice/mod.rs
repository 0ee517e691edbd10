//! Multiplicative linear algebra for split tori `G_m^n` over Q.
//!
//! A point of `G_m^n(Q)` is an n-tuple of nonzero rationals; its exponent
//! data (valuations at every prime) embeds `Γ / torsion` into an integer
//! lattice, and subtori of `G_m^n` correspond to saturated sublattices of
//! `Z^n` (their cocharacter lattices).

mod candidates;
mod factor;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};

pub use candidates::{
    d_upper, d_upper_over, enumerate_candidates, enumerate_candidates_with, evaluate_candidate,
    CandidateOptions, DEFAULT_BOX, DEFAULT_CANDIDATE_CAP,
};
pub use factor::{factor_integer, factor_rational, support_to_rational, DEFAULT_TRIAL_BOUND};

/// Sign and prime exponents of a nonzero rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportVector {
    sign: i8,
    exps: BTreeMap<u64, i64>,
}

impl SupportVector {
    pub fn new(sign: i8, mut exps: BTreeMap<u64, i64>) -> Self {
        exps.retain(|_, e| *e != 0);
        SupportVector {
            sign: if sign < 0 { -1 } else { 1 },
            exps,
        }
    }

    pub fn one() -> Self {
        SupportVector::new(1, BTreeMap::new())
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn exps(&self) -> &BTreeMap<u64, i64> {
        &self.exps
    }

    /// Torsion (±1) carries no rank.
    pub fn is_torsion(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, q: u64) -> i64 {
        self.exps.get(&q).copied().unwrap_or(0)
    }

    pub fn pow(&self, m: i64) -> SupportVector {
        let sign = if self.sign < 0 && m % 2 != 0 { -1 } else { 1 };
        SupportVector::new(sign, self.exps.iter().map(|(&q, &e)| (q, e * m)).collect())
    }
}

/// Exponent data for a tuple of generators of `Γ ≤ G_m^n(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentMatrix {
    n: usize,
    gens: Vec<Vec<SupportVector>>,
    support: Vec<u64>,
}

impl ExponentMatrix {
    pub fn new(n: usize, gens: Vec<Vec<SupportVector>>) -> Result<Self> {
        if let Some(bad) = gens.iter().find(|g| g.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        let support: BTreeSet<u64> = gens
            .iter()
            .flat_map(|g| g.iter().flat_map(|v| v.exps.keys().copied()))
            .collect();
        Ok(ExponentMatrix {
            n,
            gens,
            support: support.into_iter().collect(),
        })
    }

    /// Factors every coordinate of every generator.
    pub fn from_rationals(n: usize, gens: &[Vec<BigRational>], bound: u64) -> Result<Self> {
        let rows = gens
            .iter()
            .map(|g| g.iter().map(|q| factor_rational(q, bound)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, rows)
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(n: usize, gens: &[&[i64]]) -> Result<Self> {
        let rows = gens
            .iter()
            .map(|g| g.iter().map(|&x| factor_integer(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[Vec<SupportVector>] {
        &self.gens
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    /// Row of length `n * |support|`, entry `(i, s)` at `i * |S| + s`.
    pub fn flattened_row(&self, j: usize) -> Vec<BigInt> {
        let mut row = Vec::with_capacity(self.n * self.support.len());
        for v in &self.gens[j] {
            for &q in &self.support {
                row.push(BigInt::from(v.exponent(q)));
            }
        }
        row
    }

    pub fn flattened(&self) -> IntMatrix {
        (0..self.k()).map(|j| self.flattened_row(j)).collect()
    }

    /// The exponent vectors `(v_q(x_1), …, v_q(x_n))` of `Π g_j^{c_j}`, one per support prime.
    pub fn combination_columns(&self, c: &[i64]) -> IntMatrix {
        self.support
            .iter()
            .map(|&q| {
                (0..self.n)
                    .map(|i| {
                        BigInt::from(
                            c.iter()
                                .zip(&self.gens)
                                .map(|(&cj, g)| cj * g[i].exponent(q))
                                .sum::<i64>(),
                        )
                    })
                    .collect()
            })
            .collect()
    }

    /// All exponent columns of all generators (spans the Zariski closure's lattice).
    pub fn all_columns(&self) -> IntMatrix {
        (0..self.k())
            .flat_map(|j| {
                let mut c = vec![0i64; self.k()];
                c[j] = 1;
                self.combination_columns(&c)
            })
            .collect()
    }

    /// Restriction to a subset of generators.
    pub fn select_generators(&self, idx: &[usize]) -> ExponentMatrix {
        ExponentMatrix::new(self.n, idx.iter().map(|&j| self.gens[j].clone()).collect())
            .expect("same dimension")
    }

    /// Restriction to a subset of coordinates (the image in a quotient torus).
    pub fn select_coordinates(&self, coords: &[usize]) -> ExponentMatrix {
        ExponentMatrix::new(
            coords.len(),
            self.gens
                .iter()
                .map(|g| coords.iter().map(|&i| g[i].clone()).collect())
                .collect(),
        )
        .expect("consistent rows")
    }

    /// Every generator raised to the power `m`.
    pub fn power(&self, m: i64) -> ExponentMatrix {
        ExponentMatrix::new(
            self.n,
            self.gens
                .iter()
                .map(|g| g.iter().map(|v| v.pow(m)).collect())
                .collect(),
        )
        .expect("same shape")
    }

    /// Connected components of coordinates linked by a common generator,
    /// with the generators living in each. Torsion generators are dropped.
    pub fn blocks(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while parent[r] != r {
                r = parent[r];
            }
            parent[i] = r;
            r
        }
        for g in &self.gens {
            let touched: Vec<usize> = (0..self.n).filter(|&i| !g[i].is_torsion()).collect();
            for w in touched.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for i in 0..self.n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().0.push(i);
        }
        for (j, g) in self.gens.iter().enumerate() {
            if let Some(i) = (0..self.n).find(|&i| !g[i].is_torsion()) {
                let r = find(&mut parent, i);
                groups.get_mut(&r).unwrap().1.push(j);
            }
        }
        groups.into_values().collect()
    }
}

/// Rank of `Γ` (torsion discarded) by Bareiss elimination.
pub fn gamma_rank(m: &ExponentMatrix) -> usize {
    linalg::bareiss_rank(&m.flattened())
}

/// A saturated sublattice `L ⊆ Z^n` in Hermite normal form: the cocharacter
/// lattice of a subtorus of dimension `rank L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubspaceCandidate {
    // Field order gives the canonical (dim, HNF-lex) ordering.
    dim: usize,
    basis: IntMatrix,
    n: usize,
}

impl SubspaceCandidate {
    /// Saturates and canonicalizes the row span of `rows`.
    pub fn from_rows(rows: &[Vec<BigInt>], n: usize) -> Self {
        let basis = linalg::saturate(rows, n);
        SubspaceCandidate {
            dim: basis.len(),
            basis,
            n,
        }
    }

    pub fn zero(n: usize) -> Self {
        SubspaceCandidate {
            dim: 0,
            basis: vec![],
            n,
        }
    }

    pub fn full(n: usize) -> Self {
        SubspaceCandidate {
            dim: n,
            basis: linalg::identity(n),
            n,
        }
    }

    pub fn coordinate(n: usize, coords: &[usize]) -> Self {
        let rows: IntMatrix = coords
            .iter()
            .map(|&i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
            .collect();
        Self::from_rows(&rows, n)
    }

    pub fn join(&self, other: &SubspaceCandidate) -> Self {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Self::from_rows(&rows, self.n)
    }

    /// Direct sum of lattices placed on disjoint coordinate sets of `Z^n`.
    pub fn direct_sum(parts: &[(Vec<usize>, SubspaceCandidate)], n: usize) -> Self {
        let mut rows = vec![];
        for (coords, cand) in parts {
            for r in &cand.basis {
                let mut row = vec![BigInt::zero(); n];
                for (k, &i) in coords.iter().enumerate() {
                    row[i] = r[k].clone();
                }
                rows.push(row);
            }
        }
        Self::from_rows(&rows, n)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_i64(&self) -> Result<Vec<Vec<i64>>> {
        self.basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        x.to_i64()
                            .ok_or_else(|| Error::Inconsistent(format!("lattice entry {x} overflows i64")))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn contains(&self, other: &SubspaceCandidate) -> bool {
        self.join(other).dim == self.dim
    }
}

impl fmt::Display for SubspaceCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| {
                let e: Vec<String> = r.iter().map(ToString::to_string).collect();
                format!("({})", e.join(","))
            })
            .collect();
        write!(f, "span[{}]", rows.join(", "))
    }
}

/// `rk(Γ ∩ H_V)`: the dimension of `{c ∈ Q^k : every exponent column of
/// Π g_j^{c_j} lies in V ⊗ Q}`, less the relations of `Γ` itself.
pub fn intersect_rank(m: &ExponentMatrix, v: &SubspaceCandidate) -> Result<usize> {
    if v.n != m.n {
        return Err(Error::DimensionMismatch {
            expected: m.n,
            got: v.n,
        });
    }
    Ok(intersect_rank_with(m, v, gamma_rank(m)))
}

pub(crate) fn intersect_rank_with(m: &ExponentMatrix, v: &SubspaceCandidate, rank: usize) -> usize {
    let k = m.k();
    if v.dim == m.n {
        return rank;
    }
    let annihilator = linalg::integer_kernel(&v.basis, m.n);
    let mut system: IntMatrix = vec![];
    for phi in &annihilator {
        for &q in &m.support {
            system.push(
                m.gens
                    .iter()
                    .map(|g| {
                        phi.iter()
                            .zip(g)
                            .map(|(a, x)| a * BigInt::from(x.exponent(q)))
                            .sum()
                    })
                    .collect(),
            );
        }
    }
    let solutions = k - linalg::bareiss_rank(&system);
    solutions - (k - rank)
}
