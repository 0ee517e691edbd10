//! Leopoldt certificates for the equation order `Z[x]/(f)`.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::algebra::{algebra_unit_log, AlgebraElement, AlgebraModulus};
use crate::closure::{zp_rank_lower, RankReport};
use crate::error::{Error, Result};
use crate::padic::{PadicScalar, DEFAULT_SLACK};
use crate::poly::{self, IntPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    f: IntPoly,
    r1: usize,
    r2: usize,
    unit_rank: usize,
}

impl FieldSpec {
    pub fn new(f: IntPoly) -> Result<Self> {
        poly::check_monic(&f)?;
        poly::certify_irreducible(&f)?;
        let (r1, r2) = poly::real_root_count(&f)?;
        let unit_rank = r1 + r2 - 1;
        if r1 + 2 * r2 != f.len() - 1 || unit_rank > f.len() - 1 {
            return Err(Error::Inconsistent(format!(
                "signature ({r1}, {r2}) does not fit degree {}",
                f.len() - 1
            )));
        }
        Ok(FieldSpec {
            f,
            r1,
            r2,
            unit_rank,
        })
    }

    pub fn f(&self) -> &IntPoly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.r1, self.r2)
    }

    pub fn unit_rank(&self) -> usize {
        self.unit_rank
    }
}

/// Returns the determinant (`±1`) of multiplication by `u`, or `NotAUnit`.
pub fn unit_check(u: &[BigInt], f: &[BigInt]) -> Result<BigInt> {
    poly::check_monic(f)?;
    if u.len() >= f.len() {
        return Err(Error::InvalidInput(format!(
            "unit {} must have degree below deg f = {}",
            poly::format_poly(u),
            f.len() - 1
        )));
    }
    let det = poly::norm(u, f);
    if !det.abs().is_one() {
        return Err(Error::NotAUnit(format!(
            "{} has norm {det}, |det| != 1",
            poly::format_poly(u)
        )));
    }
    Ok(det)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Certified { rank: usize },
    Inconclusive { rank_lo: usize, precision: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeopoldtResult {
    pub p: u64,
    pub verdict: Verdict,
    pub unit_rank: usize,
    pub rank_report: RankReport,
    pub log_rows: Vec<Vec<PadicScalar>>,
}

/// Certifies `dim Γ̄ = rk Γ = r1 + r2 − 1` for the supplied units at `p`.
pub fn leopoldt_check(
    field: &FieldSpec,
    units: &[IntPoly],
    p: u64,
    n: i64,
) -> Result<LeopoldtResult> {
    if n < 1 {
        return Err(Error::InvalidInput(format!("precision must be at least 1, got {n}")));
    }
    let m = AlgebraModulus::new(field.f.clone(), p, n + DEFAULT_SLACK)?;
    if units.len() != field.unit_rank {
        return Err(Error::WrongUnitCount {
            expected: field.unit_rank,
            got: units.len(),
        });
    }
    for u in units {
        unit_check(u, &field.f)?;
    }
    let log_rows = units
        .iter()
        .map(|u| {
            let e = AlgebraElement::from_integers(u, &m)?;
            Ok(algebra_unit_log(&e, &m)?
                .into_coeffs()
                .into_iter()
                .map(|c| c.truncate(n))
                .collect())
        })
        .collect::<Result<Vec<Vec<PadicScalar>>>>()?;
    let rank_report = zp_rank_lower(&log_rows)?;
    let verdict = if rank_report.rank_lo == field.unit_rank {
        Verdict::Certified {
            rank: field.unit_rank,
        }
    } else {
        Verdict::Inconclusive {
            rank_lo: rank_report.rank_lo,
            precision: n,
        }
    };
    Ok(LeopoldtResult {
        p,
        verdict,
        unit_rank: field.unit_rank,
        rank_report,
        log_rows,
    })
}
