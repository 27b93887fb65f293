//! Integrability of the distribution attached to a role partition.
//!
//! The distribution is cut out by `dx_σ = 0` (σ ∈ S) and
//! `θ_* = Σ_{a∈A} F_a dx_a = 0`. It is spanned by `X_p = ∂_p` (p ∈ P) and
//! `Y_{a,a'} = F_{a'} ∂_a − F_a ∂_{a'}` for consecutive `a, a'` in A. The
//! larger distribution drops the `dx_σ` forms and adds `∂_σ` to the span.
//! Integrability is tested by evaluating every annihilating form on the Lie
//! bracket of every pair of spanning fields at sampled points.
//!
//! The form `θ_*` sums over the whole A block; with that reading
//! `θ_*([X_p, Y_{a,a'}]) = F_a F_{pa'} − F_{a'} F_{pa}`, the negated PDE
//! residual.

use serde::Serialize;

use crate::expr::Expr;
use crate::reducibility::{RolePartition, NOT_REDUCIBLE_TOL, REDUCIBLE_TOL};
use crate::web::{Point, SamplePlan, WebError, WebSpec};

/// Vector field with symbolic components, one per coordinate.
#[derive(Debug, Clone)]
pub struct VectorField {
    pub name: String,
    pub components: Vec<Expr>,
    /// `jacobian[i][j] = ∂ components[i] / ∂x_{j+1}`.
    jacobian: Vec<Vec<Expr>>,
}

impl VectorField {
    pub fn new(name: impl Into<String>, components: Vec<Expr>) -> Self {
        let n = components.len();
        let jacobian = components
            .iter()
            .map(|c| (1..=n).map(|j| c.diff(j)).collect())
            .collect();
        VectorField {
            name: name.into(),
            components,
            jacobian,
        }
    }

    /// Coordinate field `∂_idx` (1-based).
    pub fn coordinate(n: usize, idx: usize) -> Self {
        let components = (1..=n)
            .map(|i| if i == idx { Expr::one() } else { Expr::zero() })
            .collect();
        VectorField::new(format!("d{idx}"), components)
    }

    pub fn eval(&self, pt: &[f64]) -> Result<Vec<f64>, WebError> {
        Ok(self
            .components
            .iter()
            .map(|c| c.eval(pt))
            .collect::<Result<_, _>>()?)
    }

    fn eval_jacobian(&self, pt: &[f64]) -> Result<Vec<Vec<f64>>, WebError> {
        self.jacobian
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.eval(pt).map_err(WebError::from))
                    .collect()
            })
            .collect()
    }
}

/// `[V, W]^i = Σ_j V^j ∂_j W^i − W^j ∂_j V^i` at a point.
pub fn lie_bracket(v: &VectorField, w: &VectorField, pt: &[f64]) -> Result<Vec<f64>, WebError> {
    let (vv, wv) = (v.eval(pt)?, w.eval(pt)?);
    let (vj, wj) = (v.eval_jacobian(pt)?, w.eval_jacobian(pt)?);
    let n = vv.len();
    Ok((0..n)
        .map(|i| (0..n).map(|j| vv[j] * wj[i][j] - wv[j] * vj[i][j]).sum())
        .collect())
}

/// One-form `Σ_i coefficients[i] dx_{i+1}`.
#[derive(Debug, Clone)]
pub struct OneForm {
    pub name: String,
    pub coefficients: Vec<Expr>,
}

impl OneForm {
    pub fn eval(&self, pt: &[f64]) -> Result<Vec<f64>, WebError> {
        Ok(self
            .coefficients
            .iter()
            .map(|c| c.eval(pt))
            .collect::<Result<_, _>>()?)
    }
}

/// `|θ(v)|` together with the scale `Σ_i |θ_i| |v_i| + 1`.
pub fn annihilation(form: &[f64], vector: &[f64]) -> (f64, f64) {
    let value: f64 = form.iter().zip(vector).map(|(t, v)| t * v).sum();
    let scale: f64 = form
        .iter()
        .zip(vector)
        .map(|(t, v)| (t * v).abs())
        .sum::<f64>()
        + 1.0;
    (value, scale)
}

/// Annihilating forms and spanning fields of the distribution.
#[derive(Debug, Clone)]
pub struct DistributionFrame {
    pub partition: RolePartition,
    pub large: bool,
    pub forms: Vec<OneForm>,
    pub fields: Vec<VectorField>,
}

impl DistributionFrame {
    /// Frame of the distribution `dx_σ = 0, θ_* = 0`.
    pub fn build(web: &WebSpec, part: &RolePartition) -> Self {
        Self::assemble(web, part, false)
    }

    /// Frame of the larger distribution `θ_* = 0` alone.
    pub fn build_large(web: &WebSpec, part: &RolePartition) -> Self {
        Self::assemble(web, part, true)
    }

    fn assemble(web: &WebSpec, part: &RolePartition, large: bool) -> Self {
        let n = web.n();
        let mut forms = Vec::new();
        if !large {
            for &s in part.s() {
                let coefficients = (1..=n)
                    .map(|i| if i == s { Expr::one() } else { Expr::zero() })
                    .collect();
                forms.push(OneForm {
                    name: format!("dx{s}"),
                    coefficients,
                });
            }
        }
        let theta = (1..=n)
            .map(|i| {
                if part.a().contains(&i) {
                    web.partial(i).clone()
                } else {
                    Expr::zero()
                }
            })
            .collect();
        forms.push(OneForm {
            name: "theta".into(),
            coefficients: theta,
        });

        let mut fields: Vec<VectorField> = part
            .p()
            .iter()
            .map(|&p| VectorField::coordinate(n, p))
            .collect();
        if large {
            fields.extend(part.s().iter().map(|&s| VectorField::coordinate(n, s)));
        }
        for pair in part.a().windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let components = (1..=n)
                .map(|i| {
                    if i == a {
                        web.partial(b).clone()
                    } else if i == b {
                        crate::expr::simplify::neg(web.partial(a).clone())
                    } else {
                        Expr::zero()
                    }
                })
                .collect();
            fields.push(VectorField::new(format!("Y{a},{b}"), components));
        }
        DistributionFrame {
            partition: part.clone(),
            large,
            forms,
            fields,
        }
    }

    /// Rank of the distribution: `l + |A| − 1`, plus `|S|` for the larger one.
    pub fn dimension(&self) -> usize {
        self.fields.len()
    }

    pub fn theta(&self) -> &OneForm {
        self.forms.last().expect("theta is always present")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrability {
    Integrable,
    NotIntegrable,
    Inconclusive,
}

impl Integrability {
    pub fn from_relative(rel: f64) -> Self {
        if rel <= REDUCIBLE_TOL {
            Integrability::Integrable
        } else if rel > NOT_REDUCIBLE_TOL {
            Integrability::NotIntegrable
        } else {
            Integrability::Inconclusive
        }
    }
}

impl std::fmt::Display for Integrability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Integrability::Integrable => "integrable",
            Integrability::NotIntegrable => "not_integrable",
            Integrability::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrobeniusWitness {
    pub fields: (String, String),
    pub form: String,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrobeniusReport {
    pub partition: RolePartition,
    pub large: bool,
    pub verdict: Integrability,
    #[serde(rename = "max_residual")]
    pub max_defect: Option<f64>,
    #[serde(rename = "scale")]
    pub defect_scale: Option<f64>,
    pub relative_residual: Option<f64>,
    pub worst_witness: Option<FrobeniusWitness>,
    pub samples: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl FrobeniusReport {
    fn inconclusive(part: &RolePartition, large: bool, seed: u64, failure: String) -> Self {
        FrobeniusReport {
            partition: part.clone(),
            large,
            verdict: Integrability::Inconclusive,
            max_defect: None,
            defect_scale: None,
            relative_residual: None,
            worst_witness: None,
            samples: 0,
            seed,
            failure: Some(failure),
        }
    }
}

impl std::fmt::Display for FrobeniusReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.large { "frobenius-large" } else { "frobenius" };
        write!(
            f,
            "{:<15} {:<28} {:<14}",
            tag,
            self.partition.to_string(),
            self.verdict.to_string()
        )?;
        match self.relative_residual {
            Some(rel) => write!(f, " rel={rel:.3e}")?,
            None => write!(f, " rel=-")?,
        }
        if let Some(w) = &self.worst_witness {
            write!(
                f,
                " worst={}([{},{}]) at {}",
                w.form, w.fields.0, w.fields.1, w.point
            )?;
        }
        if let Some(msg) = &self.failure {
            write!(f, " [{msg}]")?;
        }
        Ok(())
    }
}

/// Frame of the distribution for `part`; see [`DistributionFrame::build`].
pub fn build_frame(web: &WebSpec, part: &RolePartition) -> DistributionFrame {
    DistributionFrame::build(web, part)
}

/// Evaluate every form on every pairwise bracket at the given points.
pub fn bracket_defects(
    frame: &DistributionFrame,
    points: &[Point],
) -> Result<(f64, f64, f64, Option<FrobeniusWitness>), WebError> {
    let (mut abs, mut scale, mut rel, mut witness) = (0.0, 1.0, 0.0, None);
    for pt in points {
        let forms: Vec<Vec<f64>> = frame
            .forms
            .iter()
            .map(|form| form.eval(pt))
            .collect::<Result<_, _>>()?;
        for (i, v) in frame.fields.iter().enumerate() {
            for w in &frame.fields[i + 1..] {
                let bracket = lie_bracket(v, w, pt)?;
                for (form, coeffs) in frame.forms.iter().zip(&forms) {
                    let (value, s) = annihilation(coeffs, &bracket);
                    let r = if value.is_nan() {
                        f64::INFINITY
                    } else {
                        value.abs() / s
                    };
                    if witness.is_none() || r > rel {
                        abs = value.abs();
                        scale = s;
                        rel = r;
                        witness = Some(FrobeniusWitness {
                            fields: (v.name.clone(), w.name.clone()),
                            form: form.name.clone(),
                            point: pt.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok((abs, scale, rel, witness))
}

/// Sampled Frobenius test of the distribution (or of the larger one when
/// `large` is set).
pub fn check_integrability(
    web: &WebSpec,
    part: &RolePartition,
    plan: &SamplePlan,
    large: bool,
) -> Result<FrobeniusReport, WebError> {
    if web.n() != part.n() {
        return Err(WebError::Dimension {
            expected: web.n(),
            found: part.n(),
        });
    }
    let frame = DistributionFrame::assemble(web, part, large);
    let points = match web.sample(plan) {
        Ok(points) => points,
        Err(e) => {
            return Ok(FrobeniusReport::inconclusive(
                part,
                large,
                plan.seed,
                e.to_string(),
            ))
        }
    };
    match bracket_defects(&frame, &points) {
        Ok((abs, scale, rel, witness)) => Ok(FrobeniusReport {
            partition: part.clone(),
            large,
            verdict: Integrability::from_relative(rel),
            max_defect: Some(abs),
            defect_scale: Some(scale),
            relative_residual: Some(rel),
            worst_witness: witness,
            samples: points.len(),
            seed: plan.seed,
            failure: None,
        }),
        Err(e) => Ok(FrobeniusReport::inconclusive(
            part,
            large,
            plan.seed,
            e.to_string(),
        )),
    }
}
