//! Reduct `(l+1, k)`-reducibility of a web's subweb.
//!
//! Three sampled criteria are provided and must agree: equal torsion
//! components `a_{pa} = a_{pb}` ([`check_subweb`]), the vanishing of the
//! second-order residual `F_{pa} F_b − F_{pb} F_a` ([`check_pde`]), and the
//! stronger whole-web condition that also requires `a_{σa} = a_{σb}` for the
//! fixed block ([`check_full`]). Integrability of the associated
//! distribution lives in [`crate::frobenius`].

mod compose;
mod partition;
mod report;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use compose::{compose, ComposeError};
pub use partition::{parse_index_list, PartitionError, RolePartition};
pub use report::{
    Criterion, ReducibilityReport, Verdict, Witness, NOT_REDUCIBLE_TOL, REDUCIBLE_TOL,
};

use crate::web::{Derivatives, Point, SamplePlan, TorsionTable, WebError, WebSpec};
use report::Worst;

/// Largest dimension [`scan`] accepts.
pub const MAX_SCAN_DIMENSION: usize = 8;

/// Residual of `F_{pa}/F_{pb} = F_a/F_b` in cross-multiplied form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdeResidual {
    pub value: f64,
    /// `|F_{pa} F_b| + |F_{pb} F_a| + 1`.
    pub scale: f64,
}

impl PdeResidual {
    pub fn relative(&self) -> f64 {
        self.value.abs() / self.scale
    }
}

/// `R = F_{pa} F_b − F_{pb} F_a` from evaluated partials (1-based indices).
pub fn residual_from(d: &Derivatives, p: usize, a: usize, b: usize) -> PdeResidual {
    let (p, a, b) = (p - 1, a - 1, b - 1);
    let left = d.hess[p][a] * d.grad[b];
    let right = d.hess[p][b] * d.grad[a];
    PdeResidual {
        value: left - right,
        scale: left.abs() + right.abs() + 1.0,
    }
}

/// PDE residual at a regular point.
pub fn residual_pde(
    web: &WebSpec,
    p: usize,
    a: usize,
    b: usize,
    pt: &[f64],
) -> Result<PdeResidual, WebError> {
    for idx in [p, a, b] {
        if idx == 0 || idx > web.n() {
            return Err(WebError::Invalid(format!(
                "index {idx} outside 1..={}",
                web.n()
            )));
        }
    }
    let d = web.regular_derivatives(pt)?;
    Ok(residual_from(&d, p, a, b))
}

fn check_dimension(web: &WebSpec, part: &RolePartition) -> Result<(), WebError> {
    if web.n() == part.n() {
        Ok(())
    } else {
        Err(WebError::Dimension {
            expected: web.n(),
            found: part.n(),
        })
    }
}

fn finish(
    criterion: Criterion,
    part: &RolePartition,
    plan: &SamplePlan,
    samples: usize,
    worst: Worst<Witness>,
) -> ReducibilityReport {
    ReducibilityReport {
        criterion,
        partition: part.clone(),
        verdict: Verdict::from_relative(worst.rel),
        max_residual: Some(worst.abs),
        residual_scale: Some(worst.scale),
        relative_residual: Some(worst.rel),
        worst_witness: worst.witness,
        samples,
        seed: plan.seed,
        failure: None,
    }
}

/// Shared driver: sample, then fold `per_point` over the points.
fn run(
    web: &WebSpec,
    part: &RolePartition,
    plan: &SamplePlan,
    criterion: Criterion,
    per_point: impl Fn(&Point, &mut Worst<Witness>) -> Result<(), WebError>,
) -> Result<ReducibilityReport, WebError> {
    check_dimension(web, part)?;
    let points = match web.sample(plan) {
        Ok(points) => points,
        Err(e) => {
            return Ok(ReducibilityReport::inconclusive(
                criterion,
                part.clone(),
                plan.seed,
                e.to_string(),
            ))
        }
    };
    let mut worst = Worst::new();
    for pt in &points {
        if let Err(e) = per_point(pt, &mut worst) {
            return Ok(ReducibilityReport::inconclusive(
                criterion,
                part.clone(),
                plan.seed,
                e.to_string(),
            ));
        }
    }
    Ok(finish(criterion, part, plan, points.len(), worst))
}

fn torsion_pairs(
    table: &TorsionTable,
    firsts: &[usize],
    part: &RolePartition,
    pt: &Point,
    worst: &mut Worst<Witness>,
) {
    let scale = table.scale();
    for &p in firsts {
        for (a, b) in part.a_pairs() {
            let diff = table.component(p, a) - table.component(p, b);
            worst.offer(diff, scale, || Witness {
                p,
                a,
                b,
                point: pt.clone(),
            });
        }
    }
}

/// Torsion criterion: `a_{pa} = a_{pb}` for `p ∈ P`, `a, b ∈ A`.
///
/// Differences are taken relative to [`TorsionTable::scale`].
pub fn check_subweb(
    web: &WebSpec,
    part: &RolePartition,
    plan: &SamplePlan,
) -> Result<ReducibilityReport, WebError> {
    run(web, part, plan, Criterion::Torsion, |pt, worst| {
        let table = web.torsion(pt)?;
        torsion_pairs(&table, part.p(), part, pt, worst);
        Ok(())
    })
}

/// Whole-web criterion: the torsion equalities for `P` and additionally
/// `a_{σa} = a_{σb}` for `σ ∈ S`.
pub fn check_full(
    web: &WebSpec,
    part: &RolePartition,
    plan: &SamplePlan,
) -> Result<ReducibilityReport, WebError> {
    run(web, part, plan, Criterion::Full, |pt, worst| {
        let table = web.torsion(pt)?;
        torsion_pairs(&table, part.p(), part, pt, worst);
        torsion_pairs(&table, part.s(), part, pt, worst);
        Ok(())
    })
}

/// PDE criterion: `F_{pa} F_b − F_{pb} F_a = 0` over every `p ∈ P` and
/// unordered pair in `A`.
pub fn check_pde(
    web: &WebSpec,
    part: &RolePartition,
    plan: &SamplePlan,
) -> Result<ReducibilityReport, WebError> {
    run(web, part, plan, Criterion::Pde, |pt, worst| {
        let d = web.regular_derivatives(pt)?;
        for &p in part.p() {
            for (a, b) in part.a_pairs() {
                let r = residual_from(&d, p, a, b);
                worst.offer(r.value, r.scale, || Witness {
                    p,
                    a,
                    b,
                    point: pt.clone(),
                });
            }
        }
        Ok(())
    })
}

/// Dispatch on a criterion.
pub fn check(
    web: &WebSpec,
    part: &RolePartition,
    plan: &SamplePlan,
    criterion: Criterion,
) -> Result<ReducibilityReport, WebError> {
    match criterion {
        Criterion::Torsion => check_subweb(web, part, plan),
        Criterion::Pde => check_pde(web, part, plan),
        Criterion::Full => check_full(web, part, plan),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("scan supports n <= {MAX_SCAN_DIMENSION}, got {0}")]
    TooLarge(usize),
    #[error("l_max must be at least 1")]
    NoRoles,
    #[error(transparent)]
    Web(#[from] WebError),
}

/// Run the PDE criterion on every admissible partition with `|P| <= l_max`.
pub fn scan(
    web: &WebSpec,
    plan: &SamplePlan,
    l_max: usize,
) -> Result<Vec<(RolePartition, ReducibilityReport)>, ScanError> {
    scan_with(web, plan, l_max, Criterion::Pde)
}

/// [`scan`] with a chosen criterion. Reports are sorted by relative
/// residual ascending; failed runs go last. Ties keep enumeration order.
pub fn scan_with(
    web: &WebSpec,
    plan: &SamplePlan,
    l_max: usize,
    criterion: Criterion,
) -> Result<Vec<(RolePartition, ReducibilityReport)>, ScanError> {
    if web.n() > MAX_SCAN_DIMENSION {
        return Err(ScanError::TooLarge(web.n()));
    }
    if l_max == 0 {
        return Err(ScanError::NoRoles);
    }
    let parts = RolePartition::enumerate(web.n(), l_max);
    let mut results = parts
        .into_par_iter()
        .map(|part| {
            let report = check(web, &part, plan, criterion)?;
            Ok((part, report))
        })
        .collect::<Result<Vec<_>, WebError>>()?;
    results.sort_by(|x, y| {
        let key = |r: &ReducibilityReport| r.relative_residual.unwrap_or(f64::INFINITY);
        key(&x.1).total_cmp(&key(&y.1))
    });
    Ok(results)
}
