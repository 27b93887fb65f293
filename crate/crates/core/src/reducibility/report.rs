use std::fmt;

use serde::Serialize;

use super::partition::RolePartition;
use crate::web::Point;

/// Relative residuals at or below this are rounding noise.
pub const REDUCIBLE_TOL: f64 = 1e-9;
/// Relative residuals above this are structural. Values in between are
/// reported as inconclusive.
pub const NOT_REDUCIBLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Reducible,
    NotReducible,
    Inconclusive,
}

impl Verdict {
    pub fn from_relative(rel: f64) -> Verdict {
        if rel <= REDUCIBLE_TOL {
            Verdict::Reducible
        } else if rel > NOT_REDUCIBLE_TOL {
            Verdict::NotReducible
        } else {
            Verdict::Inconclusive
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Reducible => "reducible",
            Verdict::NotReducible => "not_reducible",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Criterion {
    /// Torsion equalities `a_{pa} = a_{pb}`.
    #[serde(rename = "eq14")]
    Torsion,
    /// Second-order PDE residual `F_{pa} F_b − F_{pb} F_a`.
    #[serde(rename = "eq20")]
    Pde,
    /// Torsion equalities extended to the fixed block, `a_{σa} = a_{σb}`.
    #[serde(rename = "eq18")]
    Full,
}

impl Criterion {
    pub fn tag(self) -> &'static str {
        match self {
            Criterion::Torsion => "eq14",
            Criterion::Pde => "eq20",
            Criterion::Full => "eq18",
        }
    }
}

/// Where the worst relative residual was found: the index playing the
/// first role (`p`, or `σ` for the fixed-block conditions) and the A pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub p: usize,
    pub a: usize,
    pub b: usize,
    pub point: Point,
}

/// Outcome of one reducibility criterion on one partition.
///
/// A `reducible` verdict means the residual vanished (to rounding) at every
/// sampled regular point; it is not a symbolic proof.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducibilityReport {
    pub criterion: Criterion,
    pub partition: RolePartition,
    pub verdict: Verdict,
    /// Absolute residual at the worst sample.
    pub max_residual: Option<f64>,
    /// Residual scale at the worst sample.
    #[serde(rename = "scale")]
    pub residual_scale: Option<f64>,
    pub relative_residual: Option<f64>,
    pub worst_witness: Option<Witness>,
    pub samples: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl ReducibilityReport {
    pub(crate) fn inconclusive(
        criterion: Criterion,
        partition: RolePartition,
        seed: u64,
        failure: String,
    ) -> Self {
        ReducibilityReport {
            criterion,
            partition,
            verdict: Verdict::Inconclusive,
            max_residual: None,
            residual_scale: None,
            relative_residual: None,
            worst_witness: None,
            samples: 0,
            seed,
            failure: Some(failure),
        }
    }

    /// `max_residual / scale`, if any sample was evaluated.
    pub fn relative(&self) -> Option<f64> {
        self.relative_residual
    }
}

impl fmt::Display for ReducibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<15} {:<28} {:<14}",
            self.criterion.tag(),
            self.partition.to_string(),
            self.verdict.to_string()
        )?;
        match self.relative_residual {
            Some(rel) => write!(f, " rel={rel:.3e}")?,
            None => write!(f, " rel=-")?,
        }
        if let Some(w) = &self.worst_witness {
            write!(f, " worst=({},{},{}) at {}", w.p, w.a, w.b, w.point)?;
        }
        if let Some(msg) = &self.failure {
            write!(f, " [{msg}]")?;
        }
        Ok(())
    }
}

/// Running maximum of `|residual| / scale` with its witness.
#[derive(Debug, Clone)]
pub(crate) struct Worst<W> {
    pub abs: f64,
    pub scale: f64,
    pub rel: f64,
    pub witness: Option<W>,
}

impl<W> Worst<W> {
    pub fn new() -> Self {
        Worst {
            abs: 0.0,
            scale: 1.0,
            rel: 0.0,
            witness: None,
        }
    }

    pub fn offer(&mut self, residual: f64, scale: f64, witness: impl FnOnce() -> W) {
        let abs = residual.abs();
        let rel = if abs.is_nan() {
            f64::INFINITY
        } else {
            abs / scale
        };
        if self.witness.is_none() || rel > self.rel {
            self.abs = abs;
            self.scale = scale;
            self.rel = rel;
            self.witness = Some(witness());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert_eq!(Verdict::from_relative(0.0), Verdict::Reducible);
        assert_eq!(Verdict::from_relative(1e-9), Verdict::Reducible);
        assert_eq!(Verdict::from_relative(1e-8), Verdict::Inconclusive);
        assert_eq!(Verdict::from_relative(1e-6), Verdict::Inconclusive);
        assert_eq!(Verdict::from_relative(2e-6), Verdict::NotReducible);
        assert_eq!(Verdict::from_relative(f64::INFINITY), Verdict::NotReducible);
    }

    #[test]
    fn worst_keeps_first_maximum() {
        let mut w = Worst::new();
        w.offer(0.0, 1.0, || 1);
        w.offer(-2.0, 4.0, || 2);
        w.offer(1.0, 2.0, || 3);
        assert_eq!((w.abs, w.scale, w.witness), (2.0, 4.0, Some(2)));
    }
}
