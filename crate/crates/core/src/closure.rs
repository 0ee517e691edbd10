//! Closure dimension and the `d(Γ)` bracket for products of supported groups.
//!
//! The lower end of a bracket is the certified Z_p-rank of the log matrix;
//! the upper end comes from algebra (subgroup candidates), never from
//! numerics, so equality of the two is a proof.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{algebra_unit_log, is_unit, AlgebraElement, AlgebraModulus};
use crate::arith;
use crate::elliptic::{elliptic_log, torsion_test, CurveSpec, RationalPoint};
use crate::error::{Error, Result};
use crate::lattice::{ExponentMatrix, DEFAULT_TRIAL_BOUND};
use crate::linalg;
use crate::number_field::unit_check;
use crate::padic::{unit_log, PadicScalar, DEFAULT_SLACK};
use crate::poly::{self, IntPoly};
use crate::search::{search_d_upper, SearchAudit, SearchPolicy};

/// Default absolute precision for log matrices.
pub const DEFAULT_PRECISION: i64 = 40;

/// Flag attached to upper bounds that only searched product subgroups.
pub const PRODUCT_CANDIDATES_ONLY: &str = "product-candidates-only";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Component {
    Additive,
    Multiplicative,
    NumberFieldTorus(IntPoly),
    EllipticCurve(CurveSpec),
}

impl Component {
    pub fn lie_dim(&self) -> usize {
        match self {
            Component::NumberFieldTorus(f) => f.len() - 1,
            _ => 1,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Component::Additive => "G_a".into(),
            Component::Multiplicative => "G_m".into(),
            Component::NumberFieldTorus(f) => format!("Res(G_m; {})", poly::format_poly(f)),
            Component::EllipticCurve(e) => format!("E: {e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    components: Vec<Component>,
}

impl GroupSpec {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput("a group needs at least one component".into()));
        }
        for c in &components {
            if let Component::NumberFieldTorus(f) = c {
                poly::check_monic(f)?;
                poly::certify_irreducible(f)?;
            }
        }
        Ok(GroupSpec { components })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn lie_dim(&self) -> usize {
        self.components.iter().map(Component::lie_dim).sum()
    }
}

/// One coordinate of a generator, matching its component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coordinate {
    Scalar(BigRational),
    Algebra(Vec<BigRational>),
    Point(RationalPoint),
}

pub type Generator = Vec<Coordinate>;

fn violation(generator: usize, component: usize, reason: impl Into<String>) -> Error {
    Error::Membership {
        generator,
        component,
        reason: reason.into(),
    }
}

fn check_shape(spec: &GroupSpec, gens: &[Generator]) -> Result<()> {
    for (j, g) in gens.iter().enumerate() {
        if g.len() != spec.components.len() {
            return Err(Error::DimensionMismatch {
                expected: spec.components.len(),
                got: g.len(),
            });
        }
        for (i, (c, x)) in spec.components.iter().zip(g).enumerate() {
            let ok = match (c, x) {
                (Component::Additive | Component::Multiplicative, Coordinate::Scalar(_)) => true,
                (Component::NumberFieldTorus(f), Coordinate::Algebra(a)) => a.len() < f.len(),
                (Component::EllipticCurve(e), Coordinate::Point(pt)) => match pt {
                    RationalPoint::Infinity => true,
                    RationalPoint::Affine { x, y } => e.contains(x, y),
                },
                _ => false,
            };
            if !ok {
                return Err(violation(j, i, "coordinate does not match the component"));
            }
        }
    }
    Ok(())
}

fn modulus_for(f: &IntPoly, p: u64, precision: i64) -> Result<AlgebraModulus> {
    AlgebraModulus::new(f.clone(), p, precision)
}

/// Checks that every generator lies in the domain of the logarithm.
pub fn membership_check(spec: &GroupSpec, gens: &[Generator], p: u64) -> Result<()> {
    if !arith::is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    check_shape(spec, gens)?;
    for (i, c) in spec.components.iter().enumerate() {
        match c {
            Component::Additive | Component::EllipticCurve(_) => {}
            Component::Multiplicative => {
                for (j, g) in gens.iter().enumerate() {
                    let Coordinate::Scalar(q) = &g[i] else { unreachable!() };
                    if q.is_zero() {
                        return Err(violation(j, i, "0 is not a point of G_m"));
                    }
                    let v = arith::val_p(q.numer(), p) as i64 - arith::val_p(q.denom(), p) as i64;
                    if v != 0 {
                        return Err(violation(j, i, format!("valuation {v} at p = {p}")));
                    }
                }
            }
            Component::NumberFieldTorus(f) => {
                let m = modulus_for(f, p, 1)?;
                for (j, g) in gens.iter().enumerate() {
                    let Coordinate::Algebra(a) = &g[i] else { unreachable!() };
                    let e = AlgebraElement::from_rationals(a, &m)?;
                    let unit = is_unit(&e, &m).map_err(|err| violation(j, i, err.to_string()))?;
                    if !unit {
                        return Err(violation(
                            j,
                            i,
                            "residue is not invertible in F_p[x]/(f)",
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn is_plus_minus_one(q: &BigRational) -> bool {
    q.abs().is_one()
}

fn coordinate_log(
    c: &Component,
    x: &Coordinate,
    p: u64,
    working: i64,
) -> Result<Vec<PadicScalar>> {
    Ok(match (c, x) {
        (Component::Additive, Coordinate::Scalar(q)) => vec![if q.is_zero() {
            PadicScalar::exact_zero(p)
        } else {
            PadicScalar::from_rational(q, p, working)?
        }],
        (Component::Multiplicative, Coordinate::Scalar(q)) => vec![if is_plus_minus_one(q) {
            PadicScalar::exact_zero(p)
        } else {
            unit_log(&PadicScalar::from_rational(q, p, working)?)?
        }],
        (Component::NumberFieldTorus(f), Coordinate::Algebra(a)) => {
            let n = f.len() - 1;
            let torsion = a.first().is_some_and(is_plus_minus_one)
                && a.iter().skip(1).all(Zero::is_zero);
            if torsion {
                vec![PadicScalar::exact_zero(p); n]
            } else {
                let m = modulus_for(f, p, working)?;
                let e = AlgebraElement::from_rationals(a, &m)?;
                algebra_unit_log(&e, &m)?.into_coeffs()
            }
        }
        (Component::EllipticCurve(e), Coordinate::Point(pt)) => {
            vec![elliptic_log(e, pt, p, working)?]
        }
        _ => return Err(Error::InvalidInput("coordinate does not match the component".into())),
    })
}

/// Rows of `log γ_j` in Lie-algebra coordinates, at absolute precision `n`.
///
/// Computation runs `DEFAULT_SLACK` digits deeper and is cut back to `n`.
pub fn log_matrix(
    spec: &GroupSpec,
    gens: &[Generator],
    p: u64,
    n: i64,
) -> Result<Vec<Vec<PadicScalar>>> {
    if n < 1 {
        return Err(Error::InvalidInput(format!("precision must be at least 1, got {n}")));
    }
    membership_check(spec, gens, p)?;
    let working = n + DEFAULT_SLACK;
    gens.iter()
        .map(|g| {
            let mut row = vec![];
            for (c, x) in spec.components.iter().zip(g) {
                row.extend(coordinate_log(c, x, p, working)?.into_iter().map(|s| s.truncate(n)));
            }
            Ok(row)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
    pub valuation: i64,
    pub abs_precision: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rank_lo: usize,
    pub certificate: Vec<Pivot>,
    /// Least absolute precision among the matrix entries (`None` if all exact).
    pub precision_used: Option<i64>,
}

/// Certified lower bound for the Z_p-rank of the row span.
///
/// Full pivoting on the provably nonzero entry of least valuation; the
/// pivots multiply to an `r × r` minor of known finite valuation.
pub fn zp_rank_lower(matrix: &[Vec<PadicScalar>]) -> Result<RankReport> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    if let Some(r) = matrix.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch {
            expected: cols,
            got: r.len(),
        });
    }
    let p = matrix.iter().flatten().next().map(PadicScalar::p);
    if let Some(p) = p {
        if let Some(x) = matrix.iter().flatten().find(|x| x.p() != p) {
            return Err(Error::PrimeMismatch(p, x.p()));
        }
    }
    let precision_used = matrix.iter().flatten().filter_map(PadicScalar::abs_precision).min();
    let mut a: Vec<Vec<PadicScalar>> = matrix.to_vec();
    let mut row_used = vec![false; rows];
    let mut col_used = vec![false; cols];
    let mut certificate = vec![];
    loop {
        let mut best: Option<(i64, usize, usize)> = None;
        for r in (0..rows).filter(|&r| !row_used[r]) {
            for c in (0..cols).filter(|&c| !col_used[c]) {
                if let Some(v) = a[r][c].valuation() {
                    if best.is_none_or(|b| (v, r, c) < b) {
                        best = Some((v, r, c));
                    }
                }
            }
        }
        let Some((v, r, c)) = best else { break };
        let pivot = a[r][c].clone();
        certificate.push(Pivot {
            row: r,
            col: c,
            valuation: v,
            abs_precision: pivot.abs_precision().expect("provably nonzero"),
        });
        row_used[r] = true;
        col_used[c] = true;
        for r2 in (0..rows).filter(|&r2| !row_used[r2]) {
            if a[r2][c].is_exact_zero() {
                continue;
            }
            let factor = a[r2][c].checked_div(&pivot)?;
            for c2 in (0..cols).filter(|&c2| !col_used[c2]) {
                let t = &factor * &a[r][c2];
                a[r2][c2] = &a[r2][c2] - &t;
            }
        }
    }
    Ok(RankReport {
        rank_lo: certificate.len(),
        certificate,
        precision_used,
    })
}

/// The subgroup scheme realizing an upper bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The trivial subgroup.
    Trivial,
    /// The whole group (or component).
    Whole,
    /// A subtorus of `G_m^n` given by its cocharacter lattice (HNF rows).
    Subtorus { basis: Vec<Vec<i64>> },
    /// A product of witnesses over component groups, in component order.
    Product { parts: Vec<GroupWitness> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupWitness {
    pub components: Vec<usize>,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DBracket {
    pub lo: usize,
    pub hi: usize,
    pub witness: Witness,
    pub certified: bool,
    pub flags: Vec<String>,
    pub rank_report: RankReport,
    pub search: Option<SearchAudit>,
    pub precision: i64,
    pub box_bound: u32,
}

struct Upper {
    hi: usize,
    witness: Witness,
    search: Option<SearchAudit>,
}

fn scalars(gens: &[Generator], idx: &[usize]) -> Vec<Vec<BigRational>> {
    gens.iter()
        .map(|g| {
            idx.iter()
                .map(|&i| match &g[i] {
                    Coordinate::Scalar(q) => q.clone(),
                    _ => unreachable!("shape checked"),
                })
                .collect()
        })
        .collect()
}

fn split_torus_upper(gens: &[Generator], idx: &[usize], policy: &SearchPolicy) -> Result<Upper> {
    let m = ExponentMatrix::from_rationals(idx.len(), &scalars(gens, idx), DEFAULT_TRIAL_BOUND)?;
    let r = search_d_upper(&m, policy)?;
    Ok(Upper {
        hi: r.bound,
        witness: Witness::Subtorus {
            basis: r.witness.basis_i64()?,
        },
        search: Some(r.audit),
    })
}

fn additive_upper(gens: &[Generator], idx: &[usize]) -> Upper {
    // Every algebraic subgroup of G_a^n is a Q-subspace; H = 0 already gives rk Γ.
    Upper {
        hi: linalg::rational_rank(&scalars(gens, idx)),
        witness: Witness::Trivial,
        search: None,
    }
}

fn torus_upper(f: &IntPoly, gens: &[Generator], i: usize) -> Upper {
    let k = gens.len();
    let unit_rank = poly::real_root_count(f).map_or(k, |(r1, r2)| r1 + r2 - 1);
    let all_units = gens.iter().all(|g| match &g[i] {
        Coordinate::Algebra(a) => {
            a.iter().all(|c| c.is_integer())
                && unit_check(&a.iter().map(|c| c.to_integer()).collect::<Vec<_>>(), f).is_ok()
        }
        _ => false,
    });
    // Units of Z[x]/(f) have rank at most r1 + r2 − 1.
    let hi = if all_units { k.min(unit_rank) } else { k };
    Upper {
        hi,
        witness: Witness::Trivial,
        search: None,
    }
}

fn elliptic_upper(e: &CurveSpec, gens: &[Generator], i: usize) -> Upper {
    let any_free = gens.iter().any(|g| match &g[i] {
        Coordinate::Point(pt) => !torsion_test(e, pt),
        _ => false,
    });
    if any_free {
        Upper {
            hi: 1,
            witness: Witness::Whole,
            search: None,
        }
    } else {
        Upper {
            hi: 0,
            witness: Witness::Trivial,
            search: None,
        }
    }
}

/// Component groups searched as units: all `G_m` lines together, all `G_a`
/// lines together, every other component alone.
fn component_groups(spec: &GroupSpec) -> Vec<Vec<usize>> {
    let pick = |want: fn(&Component) -> bool| -> Vec<usize> {
        (0..spec.components.len()).filter(|&i| want(&spec.components[i])).collect()
    };
    let mult = pick(|c| matches!(c, Component::Multiplicative));
    let add = pick(|c| matches!(c, Component::Additive));
    let mut groups = vec![];
    let mut placed = vec![false; spec.components.len()];
    for i in 0..spec.components.len() {
        if placed[i] {
            continue;
        }
        let g = match spec.components[i] {
            Component::Multiplicative => mult.clone(),
            Component::Additive => add.clone(),
            _ => vec![i],
        };
        for &j in &g {
            placed[j] = true;
        }
        groups.push(g);
    }
    groups
}

fn group_upper(
    spec: &GroupSpec,
    gens: &[Generator],
    group: &[usize],
    policy: &SearchPolicy,
) -> Result<Upper> {
    Ok(match &spec.components[group[0]] {
        Component::Multiplicative => split_torus_upper(gens, group, policy)?,
        Component::Additive => additive_upper(gens, group),
        Component::NumberFieldTorus(f) => torus_upper(f, gens, group[0]),
        Component::EllipticCurve(e) => elliptic_upper(e, gens, group[0]),
    })
}

/// Algebraic upper bound for `d(Γ)`, with witness and flags.
pub fn d_upper_bound(
    spec: &GroupSpec,
    gens: &[Generator],
    policy: &SearchPolicy,
) -> Result<(usize, Witness, Vec<String>, Option<SearchAudit>)> {
    check_shape(spec, gens)?;
    let groups = component_groups(spec);
    if groups.len() == 1 {
        let u = group_upper(spec, gens, &groups[0], policy)?;
        return Ok((u.hi, u.witness, vec![], u.search));
    }
    // Γ sits inside the product of its projections, so the sum bounds d(Γ).
    let mut total = 0;
    let mut parts = vec![];
    let mut audit: Option<SearchAudit> = None;
    for g in &groups {
        let u = group_upper(spec, gens, g, policy)?;
        total += u.hi;
        if u.search.is_some() {
            audit = u.search;
        }
        parts.push(GroupWitness {
            components: g.clone(),
            witness: u.witness,
        });
    }
    let k = gens.len();
    let witness = if total > k {
        total = k;
        Witness::Trivial
    } else {
        Witness::Product { parts }
    };
    Ok((total, witness, vec![PRODUCT_CANDIDATES_ONLY.to_string()], audit))
}

/// Brackets `dim Γ̄ ≤ d(Γ)` between a certified rank and an algebraic bound.
pub fn d_bracket(
    spec: &GroupSpec,
    gens: &[Generator],
    p: u64,
    n: i64,
    policy: &SearchPolicy,
) -> Result<DBracket> {
    let logs = log_matrix(spec, gens, p, n)?;
    let rank_report = zp_rank_lower(&logs)?;
    let (hi, witness, flags, search) = d_upper_bound(spec, gens, policy)?;
    let lo = rank_report.rank_lo;
    if lo > hi {
        return Err(Error::Inconsistent(format!(
            "certified closure rank {lo} exceeds the algebraic upper bound {hi}"
        )));
    }
    Ok(DBracket {
        lo,
        hi,
        witness,
        certified: lo == hi,
        flags,
        rank_report,
        search,
        precision: n,
        box_bound: policy.box_bound,
    })
}

/// `Γ` given by integer generators in `G_a^n` (used by tests and the CLI).
pub fn additive_generators(rows: &[Vec<i64>]) -> Vec<Generator> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&x| Coordinate::Scalar(BigRational::from_integer(BigInt::from(x))))
                .collect()
        })
        .collect()
}
