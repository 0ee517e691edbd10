//! Executable checks of the dimension-function axioms and shared properties.
//!
//! Every check compares quantities that are either certified (closure
//! ranks, closed brackets) or exact (lattice ranks), so a failure is a
//! genuine counterexample and never a precision artifact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::closure::{
    d_bracket, log_matrix, Component, Coordinate, DBracket, Generator, GroupSpec,
};
use crate::elliptic::RationalPoint;
use crate::error::Result;
use crate::lattice::{
    evaluate_candidate, gamma_rank, ExponentMatrix, SubspaceCandidate, DEFAULT_TRIAL_BOUND,
};
use crate::linalg;
use crate::poly;
use crate::search::{search_d_upper, SearchPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl PropertyOutcome {
    fn new(name: &str, ok: bool, detail: String) -> Self {
        PropertyOutcome {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        }
    }

    fn skipped(name: &str, why: &str) -> Self {
        PropertyOutcome {
            name: name.into(),
            status: Status::NotApplicable,
            detail: why.into(),
        }
    }
}

/// The identity element in a component's coordinates.
pub fn identity_coordinate(c: &Component) -> Coordinate {
    match c {
        Component::Additive => Coordinate::Scalar(BigRational::zero()),
        Component::Multiplicative => Coordinate::Scalar(BigRational::one()),
        Component::NumberFieldTorus(_) => Coordinate::Algebra(vec![BigRational::one()]),
        Component::EllipticCurve(_) => Coordinate::Point(RationalPoint::Infinity),
    }
}

/// `γ^m` in the group law of each component (`m ≥ 1`).
pub fn power_generator(spec: &GroupSpec, g: &Generator, m: u32) -> Generator {
    spec.components()
        .iter()
        .zip(g)
        .map(|(c, x)| match (c, x) {
            (Component::Additive, Coordinate::Scalar(q)) => {
                Coordinate::Scalar(q * BigRational::from_integer(BigInt::from(m)))
            }
            (Component::Multiplicative, Coordinate::Scalar(q)) => {
                Coordinate::Scalar(num_traits::pow(q.clone(), m as usize))
            }
            (Component::NumberFieldTorus(f), Coordinate::Algebra(a)) => {
                Coordinate::Algebra(poly::pow_mod(a, m as u64, f))
            }
            (Component::EllipticCurve(e), Coordinate::Point(pt)) => {
                Coordinate::Point(pt.mul_by_n(m as i64, e))
            }
            _ => x.clone(),
        })
        .collect()
}

/// `G × G` with `Γ × Γ` generated by `(γ, 1)` and `(1, γ)`.
pub fn self_product(spec: &GroupSpec, gens: &[Generator]) -> Result<(GroupSpec, Vec<Generator>)> {
    let mut comps = spec.components().to_vec();
    comps.extend(spec.components().iter().cloned());
    let ids: Vec<Coordinate> = spec.components().iter().map(identity_coordinate).collect();
    let mut out = vec![];
    for g in gens {
        out.push(g.iter().cloned().chain(ids.iter().cloned()).collect());
    }
    for g in gens {
        out.push(ids.iter().cloned().chain(g.iter().cloned()).collect());
    }
    Ok((GroupSpec::new(comps)?, out))
}

fn project(spec: &GroupSpec, gens: &[Generator], keep: &[usize]) -> Result<(GroupSpec, Vec<Generator>)> {
    let comps = keep.iter().map(|&i| spec.components()[i].clone()).collect();
    let gens = gens
        .iter()
        .map(|g| keep.iter().map(|&i| g[i].clone()).collect())
        .collect();
    Ok((GroupSpec::new(comps)?, gens))
}

fn all_multiplicative(spec: &GroupSpec) -> bool {
    spec.components().iter().all(|c| matches!(c, Component::Multiplicative))
}

fn all_additive(spec: &GroupSpec) -> bool {
    spec.components().iter().all(|c| matches!(c, Component::Additive))
}

fn scalar_rows(gens: &[Generator]) -> Vec<Vec<BigRational>> {
    gens.iter()
        .map(|g| {
            g.iter()
                .map(|x| match x {
                    Coordinate::Scalar(q) => q.clone(),
                    _ => BigRational::zero(),
                })
                .collect()
        })
        .collect()
}

fn exponent_matrix(spec: &GroupSpec, gens: &[Generator]) -> Result<ExponentMatrix> {
    ExponentMatrix::from_rationals(spec.components().len(), &scalar_rows(gens), DEFAULT_TRIAL_BOUND)
}

/// Exact `rk Γ` where it is available (split tori and vector groups).
fn exact_rank(spec: &GroupSpec, gens: &[Generator]) -> Result<Option<usize>> {
    if all_multiplicative(spec) {
        Ok(Some(gamma_rank(&exponent_matrix(spec, gens)?)))
    } else if all_additive(spec) {
        Ok(Some(linalg::rational_rank(&scalar_rows(gens))))
    } else {
        Ok(None)
    }
}

fn triple(b: &DBracket) -> (usize, usize, bool) {
    (b.lo, b.hi, b.certified)
}

/// Upper bound on the number of component subsets tried for the projection axiom.
const MAX_PROJECTION_COMPONENTS: usize = 6;

/// Runs the property suite on one problem.
pub fn run_property_suite(
    spec: &GroupSpec,
    gens: &[Generator],
    p: u64,
    n: i64,
    policy: &SearchPolicy,
) -> Result<Vec<PropertyOutcome>> {
    let base = d_bracket(spec, gens, p, n, policy)?;
    let k = gens.len();
    let rank = exact_rank(spec, gens)?;
    let mut out = vec![];

    // (1): enlarging the ambient group by a G_m factor that Γ does not touch.
    {
        let mut comps = spec.components().to_vec();
        comps.push(Component::Multiplicative);
        let bigger = GroupSpec::new(comps)?;
        let lifted: Vec<Generator> = gens
            .iter()
            .map(|g| {
                let mut g = g.clone();
                g.push(identity_coordinate(&Component::Multiplicative));
                g
            })
            .collect();
        let b = d_bracket(&bigger, &lifted, p, n, policy)?;
        out.push(PropertyOutcome::new(
            "axiom_1_ambient",
            (b.lo, b.hi) == (base.lo, base.hi),
            format!("G: ({}, {}); G x G_m: ({}, {})", base.lo, base.hi, b.lo, b.hi),
        ));
    }

    // (2): lo ≤ hi ≤ rk Γ.
    let bound = rank.unwrap_or(k);
    out.push(PropertyOutcome::new(
        "axiom_2_rank",
        base.lo <= base.hi && base.hi <= bound,
        format!(
            "lo {} <= hi {} <= {} {}",
            base.lo,
            base.hi,
            if rank.is_some() { "rk" } else { "k" },
            bound
        ),
    ));

    // (3): dim Γ ≤ dim H + ∂(Γ'') for H a product of components (or coordinate lines).
    let m = spec.components().len();
    if m < 2 {
        out.push(PropertyOutcome::skipped("axiom_3_projection", "single component"));
    } else if m > MAX_PROJECTION_COMPONENTS {
        out.push(PropertyOutcome::skipped("axiom_3_projection", "too many components"));
    } else {
        let mut ok = true;
        let mut detail = vec![];
        for mask in 1..(1usize << m) - 1 {
            let h: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            let rest: Vec<usize> = (0..m).filter(|i| mask & (1 << i) == 0).collect();
            let dim_h: usize = h.iter().map(|&i| spec.components()[i].lie_dim()).sum();
            let (qspec, qgens) = project(spec, gens, &rest)?;
            let q = d_bracket(&qspec, &qgens, p, n, policy)?;
            if base.lo > dim_h + q.hi {
                ok = false;
                detail.push(format!("H = {h:?}: lo {} > {} + {}", base.lo, dim_h, q.hi));
            }
            if all_multiplicative(spec) {
                // The lifted witness H ⊕ V'' must evaluate to exactly dim H + term(V'').
                let mq = exponent_matrix(&qspec, &qgens)?;
                let r = search_d_upper(&mq, policy)?;
                let mut parts = vec![(h.clone(), SubspaceCandidate::full(h.len()))];
                parts.push((rest.clone(), r.witness.clone()));
                let lifted = SubspaceCandidate::direct_sum(&parts, m);
                let term = evaluate_candidate(&exponent_matrix(spec, gens)?, &lifted)?;
                if term != dim_h + r.bound {
                    ok = false;
                    detail.push(format!("H = {h:?}: lifted term {term} != {} + {}", dim_h, r.bound));
                }
            }
        }
        out.push(PropertyOutcome::new(
            "axiom_3_projection",
            ok,
            if ok {
                format!("{} subgroups checked", (1usize << m) - 2)
            } else {
                detail.join("; ")
            },
        ));
    }

    // (i): sub-lists of generators.
    {
        let mut ok = true;
        let mut detail = vec![];
        let mfull = if all_multiplicative(spec) {
            let mm = exponent_matrix(spec, gens)?;
            let full = search_d_upper(&mm, policy)?;
            Some((mm, full))
        } else {
            None
        };
        for j in 0..k {
            let sub: Vec<Generator> =
                gens.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, g)| g.clone()).collect();
            let b = d_bracket(spec, &sub, p, n, policy)?;
            if b.lo > base.hi || (b.certified && base.certified && b.hi > base.hi) {
                ok = false;
                detail.push(format!("drop {j}: ({}, {}) vs ({}, {})", b.lo, b.hi, base.lo, base.hi));
            }
            if let Some((mm, full)) = &mfull {
                let idx: Vec<usize> = (0..k).filter(|&i| i != j).collect();
                let msub = mm.select_generators(&idx);
                let term = evaluate_candidate(&msub, &full.witness)?;
                if term > full.bound {
                    ok = false;
                    detail.push(format!("drop {j}: witness term {term} > {}", full.bound));
                }
            }
        }
        out.push(PropertyOutcome::new(
            "monotonicity_i",
            ok,
            if ok { format!("{k} sub-lists checked") } else { detail.join("; ") },
        ));
    }

    // (iv): squaring every generator.
    {
        let e = if p == 2 { 3 } else { 2 };
        let powered: Vec<Generator> = gens.iter().map(|g| power_generator(spec, g, e)).collect();
        let b = d_bracket(spec, &powered, p, n, policy)?;
        out.push(PropertyOutcome::new(
            "power_invariance_iv",
            triple(&b) == triple(&base),
            format!("m = {e}: {:?} vs {:?}", triple(&b), triple(&base)),
        ));
    }

    // (v): Γ × Γ in G × G.
    {
        let (pspec, pgens) = self_product(spec, gens)?;
        let b = d_bracket(&pspec, &pgens, p, n, policy)?;
        out.push(PropertyOutcome::new(
            "product_additivity_v",
            b.lo == 2 * base.lo && b.hi == 2 * base.hi,
            format!("({}, {}) vs 2 x ({}, {})", b.lo, b.hi, base.lo, base.hi),
        ));
    }

    // (viii): vector groups.
    if all_additive(spec) {
        let r = rank.expect("additive rank");
        out.push(PropertyOutcome::new(
            "additive_exactness_viii",
            base.lo == r && base.hi == r,
            format!("lo {}, hi {}, rank {r}", base.lo, base.hi),
        ));
    } else {
        out.push(PropertyOutcome::skipped("additive_exactness_viii", "not a vector group"));
    }

    // Doubling N must keep every digit and never lose rank; a larger box never raises hi.
    {
        let lo_logs = log_matrix(spec, gens, p, n)?;
        let hi_logs = log_matrix(spec, gens, p, 2 * n)?;
        let digits_ok = lo_logs
            .iter()
            .flatten()
            .zip(hi_logs.iter().flatten())
            .all(|(a, b)| b.truncate(n) == a.truncate(n));
        let b = d_bracket(spec, gens, p, 2 * n, policy)?;
        out.push(PropertyOutcome::new(
            "precision_monotone",
            digits_ok && b.lo >= base.lo && (!base.certified || b.lo == base.lo),
            format!("N = {n}: lo {}; N = {}: lo {}; digits agree: {digits_ok}", base.lo, 2 * n, b.lo),
        ));
        let wider = SearchPolicy {
            box_bound: policy.box_bound + 1,
            ..*policy
        };
        let b = d_bracket(spec, gens, p, n, &wider)?;
        out.push(PropertyOutcome::new(
            "box_monotone",
            b.hi <= base.hi,
            format!("B = {}: hi {}; B = {}: hi {}", policy.box_bound, base.hi, wider.box_bound, b.hi),
        ));
    }

    Ok(out)
}
