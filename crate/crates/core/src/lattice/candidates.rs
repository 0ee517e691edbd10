use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{gamma_rank, intersect_rank_with, ExponentMatrix, SubspaceCandidate};
use crate::error::{Error, Result};

pub const DEFAULT_BOX: u32 = 2;
pub const DEFAULT_CANDIDATE_CAP: usize = 100_000;

/// Knobs for the finite candidate family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CandidateOptions {
    pub box_bound: u32,
    pub include_joins: bool,
    pub cap: usize,
}

impl CandidateOptions {
    pub fn with_box(box_bound: u32) -> Self {
        CandidateOptions {
            box_bound,
            ..Self::default()
        }
    }
}

impl Default for CandidateOptions {
    fn default() -> Self {
        CandidateOptions {
            box_bound: DEFAULT_BOX,
            include_joins: true,
            cap: DEFAULT_CANDIDATE_CAP,
        }
    }
}

fn check_cap(len: usize, cap: usize) -> Result<()> {
    if len > cap {
        Err(Error::CandidateCap { cap, needed: len })
    } else {
        Ok(())
    }
}

/// Coefficient vectors in `[-B, B]^k`, nonzero, first nonzero entry positive.
fn box_vectors(k: usize, b: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * b + 1) as u64;
    let total = side.checked_pow(k as u32).unwrap_or(u64::MAX);
    (0..total).filter_map(move |mut idx| {
        let mut c = vec![0i64; k];
        for slot in c.iter_mut() {
            *slot = (idx % side) as i64 - b;
            idx /= side;
        }
        match c.iter().find(|&&x| x != 0) {
            Some(&first) if first > 0 => Some(c),
            _ => None,
        }
    })
}

/// The deterministic candidate family with default options and box `b`.
pub fn enumerate_candidates(m: &ExponentMatrix, b: u32) -> Result<Vec<SubspaceCandidate>> {
    enumerate_candidates_with(m, &CandidateOptions::with_box(b))
}

pub fn enumerate_candidates_with(
    m: &ExponentMatrix,
    opts: &CandidateOptions,
) -> Result<Vec<SubspaceCandidate>> {
    if opts.box_bound == 0 {
        return Err(Error::InvalidInput("coefficient box must be at least 1".into()));
    }
    let n = m.n();
    let k = m.k();
    if n >= usize::BITS as usize - 1 {
        return Err(Error::CandidateCap {
            cap: opts.cap,
            needed: usize::MAX,
        });
    }
    let forced = (1usize << n) + 1;
    check_cap(forced, opts.cap)?;
    let side = 2 * opts.box_bound as u64 + 1;
    let combos = side.checked_pow(k as u32).map(|t| t / 2).unwrap_or(u64::MAX);
    check_cap(forced.saturating_add(combos as usize), opts.cap)?;

    let mut base: BTreeSet<SubspaceCandidate> = BTreeSet::new();
    base.insert(SubspaceCandidate::zero(n));
    base.insert(SubspaceCandidate::full(n));
    for mask in 1usize..(1 << n) {
        let coords: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        base.insert(SubspaceCandidate::coordinate(n, &coords));
    }
    if k > 0 {
        base.insert(SubspaceCandidate::from_rows(&m.all_columns(), n));
    }
    let coefficient_vectors: Vec<Vec<i64>> = box_vectors(k, opts.box_bound as i64).collect();
    let spans: BTreeSet<SubspaceCandidate> = coefficient_vectors
        .par_iter()
        .map(|c| SubspaceCandidate::from_rows(&m.combination_columns(c), n))
        .collect();
    base.extend(spans);
    check_cap(base.len(), opts.cap)?;

    if !opts.include_joins {
        return Ok(base.into_iter().collect());
    }
    let listed: Vec<SubspaceCandidate> = base.iter().cloned().collect();
    let joins: BTreeSet<SubspaceCandidate> = (0..listed.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let listed = &listed;
            (i + 1..listed.len()).filter_map(move |j| {
                let (a, b) = (&listed[i], &listed[j]);
                // Joins with 0 or with a superset are already present.
                if a.dim() == 0 || b.dim() == n || b.contains(a) {
                    None
                } else {
                    Some(a.join(b))
                }
            })
        })
        .collect();
    base.extend(joins);
    check_cap(base.len(), opts.cap)?;
    Ok(base.into_iter().collect())
}

/// The term `dim V + rk Γ − rk(Γ ∩ H_V)`.
pub fn evaluate_candidate(m: &ExponentMatrix, v: &SubspaceCandidate) -> Result<usize> {
    let rank = gamma_rank(m);
    Ok(v.dim() + rank - super::intersect_rank(m, v)?)
}

/// Least term over a candidate list, with the earliest achiever in list order.
/// The list must share the ambient dimension of `m`.
pub fn d_upper_over(
    m: &ExponentMatrix,
    candidates: &[SubspaceCandidate],
) -> Result<(usize, SubspaceCandidate, usize)> {
    if let Some(bad) = candidates.iter().find(|v| v.ambient_dim() != m.n()) {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            got: bad.ambient_dim(),
        });
    }
    let rank = gamma_rank(m);
    let best = candidates
        .par_iter()
        .enumerate()
        .map(|(i, v)| (v.dim() + rank - intersect_rank_with(m, v, rank), i))
        .min()
        .ok_or_else(|| Error::InvalidInput("empty candidate list".into()))?;
    Ok((best.0, candidates[best.1].clone(), best.1))
}

/// Upper bound for `d(Γ)` over the box-`b` candidate family, with witness.
pub fn d_upper(m: &ExponentMatrix, b: u32) -> Result<(usize, SubspaceCandidate)> {
    let list = enumerate_candidates(m, b)?;
    let (bound, witness, _) = d_upper_over(m, &list)?;
    Ok((bound, witness))
}
