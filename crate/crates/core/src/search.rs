//! Candidate-search policy for the `d(Γ)` upper bound on split tori.
//!
//! The generators are first split into coordinate blocks: two coordinates
//! share a block when some generator is non-torsion in both. Each block is
//! searched independently and the witnesses are assembled as a product
//! subtorus, so that block-diagonal inputs get exactly additive bounds.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{
    d_upper_over, enumerate_candidates_with, CandidateOptions, ExponentMatrix, SubspaceCandidate,
    DEFAULT_BOX, DEFAULT_CANDIDATE_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchPolicy {
    pub box_bound: u32,
    pub include_joins: bool,
    pub max_candidates: usize,
}

impl Default for SearchPolicy {
    fn default() -> Self {
        SearchPolicy {
            box_bound: DEFAULT_BOX,
            include_joins: true,
            max_candidates: DEFAULT_CANDIDATE_CAP,
        }
    }
}

impl SearchPolicy {
    pub fn with_box(box_bound: u32) -> Self {
        SearchPolicy {
            box_bound,
            ..Self::default()
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.box_bound == 0 {
            return Err(Error::InvalidInput("coefficient box must be at least 1".into()));
        }
        // 0, Z^n and the coordinate sublattices are always enumerated.
        let forced = if n >= usize::BITS as usize - 1 {
            usize::MAX
        } else {
            (1usize << n) + 1
        };
        if self.max_candidates < forced {
            return Err(Error::CandidateCap {
                cap: self.max_candidates,
                needed: forced,
            });
        }
        Ok(())
    }

    fn options(&self, box_bound: u32) -> CandidateOptions {
        CandidateOptions {
            box_bound,
            include_joins: self.include_joins,
            cap: self.max_candidates,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchAudit {
    /// Distinct candidates evaluated at the final box, summed over blocks.
    pub candidates_examined: usize,
    /// Candidate counts keyed by subtorus dimension.
    pub per_dimension: BTreeMap<usize, usize>,
    /// Candidates up to and including the witness in canonical order, summed over blocks.
    pub candidates_to_witness: usize,
    /// Least box at which the final bound was already reached.
    pub first_box_achieving: u32,
    pub box_bound: u32,
    pub blocks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub bound: usize,
    pub witness: SubspaceCandidate,
    pub audit: SearchAudit,
}

struct BlockOutcome {
    bound: usize,
    witness: SubspaceCandidate,
    examined: usize,
    to_witness: usize,
    per_dimension: BTreeMap<usize, usize>,
}

fn search_block(m: &ExponentMatrix, opts: &CandidateOptions) -> Result<BlockOutcome> {
    let list = enumerate_candidates_with(m, opts)?;
    let (bound, witness, index) = d_upper_over(m, &list)?;
    let mut per_dimension = BTreeMap::new();
    for c in &list {
        *per_dimension.entry(c.dim()).or_insert(0) += 1;
    }
    Ok(BlockOutcome {
        bound,
        witness,
        examined: list.len(),
        to_witness: index + 1,
        per_dimension,
    })
}

/// Least `dim H + rk Γ − rk(Γ ∩ H)` over the policy's candidate family.
pub fn search_d_upper(m: &ExponentMatrix, policy: &SearchPolicy) -> Result<SearchResult> {
    policy.validate(m.n())?;
    let n = m.n();
    let blocks: Vec<(Vec<usize>, Vec<usize>)> = m
        .blocks()
        .into_iter()
        .filter(|(_, gens)| !gens.is_empty())
        .collect();

    let run = |b: u32| -> Result<Vec<(Vec<usize>, BlockOutcome)>> {
        blocks
            .iter()
            .map(|(coords, gens)| {
                let sub = m.select_generators(gens).select_coordinates(coords);
                Ok((coords.clone(), search_block(&sub, &policy.options(b))?))
            })
            .collect()
    };

    let outcomes = run(policy.box_bound)?;
    let bound: usize = outcomes.iter().map(|(_, o)| o.bound).sum();
    let mut first_box_achieving = policy.box_bound;
    for b in 1..policy.box_bound {
        if run(b)?.iter().map(|(_, o)| o.bound).sum::<usize>() == bound {
            first_box_achieving = b;
            break;
        }
    }

    let parts: Vec<(Vec<usize>, SubspaceCandidate)> = outcomes
        .iter()
        .map(|(coords, o)| (coords.clone(), o.witness.clone()))
        .collect();
    let witness = SubspaceCandidate::direct_sum(&parts, n);

    let mut per_dimension = BTreeMap::new();
    for (_, o) in &outcomes {
        for (&d, &c) in &o.per_dimension {
            *per_dimension.entry(d).or_insert(0) += c;
        }
    }
    let mut candidates_examined: usize = outcomes.iter().map(|(_, o)| o.examined).sum();
    let mut candidates_to_witness: usize = outcomes.iter().map(|(_, o)| o.to_witness).sum();
    if outcomes.is_empty() {
        // Torsion only: the zero subtorus alone settles the bound.
        candidates_examined = 1;
        candidates_to_witness = 1;
        per_dimension.insert(0, 1);
    }

    Ok(SearchResult {
        bound,
        witness,
        audit: SearchAudit {
            candidates_examined,
            per_dimension,
            candidates_to_witness,
            first_box_achieving,
            box_bound: policy.box_bound,
            blocks: outcomes.len(),
        },
    })
}
