//! Codimension-one webs `x_{n+1} = F(x_1, …, x_n)`: regularity, sampling
//! and the torsion tensor.
//!
//! With the co-frame `ω_α = F_α dx_α` the exterior derivatives are
//! `dω_α = Σ_{β≠α} c_{αβ} ω_α ∧ ω_β` with `c_{αβ} = −F_{αβ} / (F_α F_β)`.
//! Matching against the structure equations with connection form
//! `ω = p Σ_γ ω_γ` gives `c_{αβ} = p + a_{αβ}`; the zero-sum normalisation
//! of the torsion then fixes `p` as the mean of the off-diagonal `c`.

use std::fmt;
use std::ops::Deref;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{EvalError, Expr, Var};

pub const DEFAULT_MARGIN: f64 = 1e-3;
pub const DEFAULT_BOX: (f64, f64) = (-1.0, 1.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WebError {
    #[error("invalid web: {0}")]
    Invalid(String),
    #[error("point has {found} coordinates, web dimension is {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("point {point} is not regular: |dF/dx{index}| = {value:e} is below the margin")]
    NotRegular {
        point: Point,
        index: usize,
        value: f64,
    },
    #[error(
        "no admissible point after {rejections} consecutive rejections; check the box and margin"
    )]
    Sampling { rejections: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Coordinates `(x_1, …, x_n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    /// Parse a comma-separated coordinate list such as `0,0.5,-1`.
    pub fn parse(text: &str) -> Result<Point, String> {
        if text.trim().is_empty() {
            return Err("empty point".into());
        }
        text.split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| format!("invalid coordinate `{part}`"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Point)
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Closed sampling interval for one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// First and second partials of `F` evaluated at a point. Indices are
/// 0-based here.
#[derive(Debug, Clone)]
pub struct Derivatives {
    pub grad: Vec<f64>,
    pub hess: Vec<Vec<f64>>,
}

/// A codimension-one `(n+1)`-web in closed form.
#[derive(Debug, Clone)]
pub struct WebSpec {
    n: usize,
    function: Expr,
    partials: Vec<Expr>,
    /// Upper triangle (β ≥ α) of the second partials, mirrored on lookup.
    second: Vec<Vec<Expr>>,
    domain: Vec<Interval>,
    margin: f64,
}

impl WebSpec {
    /// Web with the default box `[-1, 1]^n` and margin `1e-3`.
    pub fn new(n: usize, function: Expr) -> Result<Self, WebError> {
        if n < 2 {
            return Err(WebError::Invalid(format!(
                "dimension must be at least 2, got {n}"
            )));
        }
        for var in function.variables() {
            match var {
                Var::X(i) if i > n => {
                    return Err(WebError::Invalid(format!(
                        "`{var}` exceeds the web dimension {n}"
                    )))
                }
                Var::U(_) => {
                    return Err(WebError::Invalid(format!(
                        "unsubstituted slot `{var}` in web function"
                    )))
                }
                _ => {}
            }
        }
        let partials: Vec<Expr> = (1..=n).map(|i| function.diff(i)).collect();
        let second = (0..n)
            .map(|a| (a..n).map(|b| partials[a].diff(b + 1)).collect())
            .collect();
        Ok(WebSpec {
            n,
            function,
            partials,
            second,
            domain: vec![
                Interval {
                    lo: DEFAULT_BOX.0,
                    hi: DEFAULT_BOX.1
                };
                n
            ],
            margin: DEFAULT_MARGIN,
        })
    }

    pub fn with_margin(mut self, margin: f64) -> Result<Self, WebError> {
        if !(margin > 0.0 && margin.is_finite()) {
            return Err(WebError::Invalid(format!(
                "margin must be positive, got {margin}"
            )));
        }
        self.margin = margin;
        Ok(self)
    }

    /// Same interval for every coordinate.
    pub fn with_uniform_box(self, lo: f64, hi: f64) -> Result<Self, WebError> {
        let n = self.n;
        self.with_box(vec![Interval { lo, hi }; n])
    }

    pub fn with_box(mut self, domain: Vec<Interval>) -> Result<Self, WebError> {
        if domain.len() != self.n {
            return Err(WebError::Dimension {
                expected: self.n,
                found: domain.len(),
            });
        }
        if let Some(bad) = domain
            .iter()
            .find(|iv| !(iv.lo.is_finite() && iv.hi.is_finite() && iv.lo < iv.hi))
        {
            return Err(WebError::Invalid(format!(
                "degenerate sampling interval [{}, {}]",
                bad.lo, bad.hi
            )));
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn function(&self) -> &Expr {
        &self.function
    }

    /// `∂F/∂x_alpha`, 1-based.
    pub fn partial(&self, alpha: usize) -> &Expr {
        &self.partials[alpha - 1]
    }

    /// `∂²F/∂x_alpha∂x_beta`, 1-based.
    pub fn second_partial(&self, alpha: usize, beta: usize) -> &Expr {
        let (lo, hi) = if alpha <= beta {
            (alpha, beta)
        } else {
            (beta, alpha)
        };
        &self.second[lo - 1][hi - lo]
    }

    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    fn check_len(&self, pt: &[f64]) -> Result<(), WebError> {
        if pt.len() == self.n {
            Ok(())
        } else {
            Err(WebError::Dimension {
                expected: self.n,
                found: pt.len(),
            })
        }
    }

    /// First partials at `pt`.
    pub fn gradient(&self, pt: &[f64]) -> Result<Vec<f64>, WebError> {
        self.check_len(pt)?;
        Ok(self
            .partials
            .iter()
            .map(|e| e.eval(pt))
            .collect::<Result<_, _>>()?)
    }

    /// First and second partials at `pt`; the Hessian is exactly symmetric.
    /// Fails if `F` itself is undefined at `pt`.
    #[allow(clippy::needless_range_loop)]
    pub fn derivatives(&self, pt: &[f64]) -> Result<Derivatives, WebError> {
        let grad = self.gradient(pt)?;
        self.function.eval(pt)?;
        let n = self.n;
        let mut hess = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in a..n {
                let v = self.second[a][b - a].eval(pt)?;
                hess[a][b] = v;
                hess[b][a] = v;
            }
        }
        Ok(Derivatives { grad, hess })
    }

    /// First coordinate whose partial falls below the margin, with its value.
    fn first_singular(&self, grad: &[f64]) -> Option<(usize, f64)> {
        grad.iter()
            .enumerate()
            .find(|(_, g)| g.abs() < self.margin)
            .map(|(i, g)| (i + 1, *g))
    }

    /// True iff every `|∂F/∂x_α| ≥ margin` at `pt`.
    pub fn is_regular(&self, pt: &[f64]) -> Result<bool, WebError> {
        let grad = self.gradient(pt)?;
        Ok(self.first_singular(&grad).is_none())
    }

    /// Derivatives at a point that must be regular.
    pub fn regular_derivatives(&self, pt: &[f64]) -> Result<Derivatives, WebError> {
        let d = self.derivatives(pt)?;
        if let Some((index, value)) = self.first_singular(&d.grad) {
            return Err(WebError::NotRegular {
                point: Point(pt.to_vec()),
                index,
                value,
            });
        }
        Ok(d)
    }

    /// Uniform rejection sampling of admissible points in the box.
    ///
    /// A candidate is admissible when it is regular and `F` with its first
    /// and second partials evaluates to finite numbers there.
    pub fn sample(&self, plan: &SamplePlan) -> Result<Vec<Point>, WebError> {
        let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
        let mut points = Vec::with_capacity(plan.count);
        let mut rejections = 0;
        while points.len() < plan.count {
            let candidate: Vec<f64> = self
                .domain
                .iter()
                .map(|iv| rng.random_range(iv.lo..=iv.hi))
                .collect();
            if self.regular_derivatives(&candidate).is_ok() {
                points.push(Point(candidate));
                rejections = 0;
            } else {
                rejections += 1;
                if rejections >= plan.max_rejections {
                    return Err(WebError::Sampling { rejections });
                }
            }
        }
        Ok(points)
    }

    /// Torsion tensor at a regular point.
    pub fn torsion(&self, pt: &[f64]) -> Result<TorsionTable, WebError> {
        let d = self.regular_derivatives(pt)?;
        Ok(TorsionTable::from_derivatives(Point(pt.to_vec()), &d))
    }
}

/// Deterministic sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplePlan {
    pub count: usize,
    pub seed: u64,
    pub max_rejections: usize,
}

impl SamplePlan {
    pub fn new(count: usize, seed: u64) -> Self {
        SamplePlan {
            count,
            seed,
            ..Default::default()
        }
    }
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            count: 50,
            seed: 42,
            max_rejections: 10_000,
        }
    }
}

/// Torsion components `a_{αβ}` at a point, with the diagonal fixed to 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionTable {
    pub point: Point,
    /// Row-major `n × n`, 0-based.
    pub a: Vec<Vec<f64>>,
    /// Connection coefficient `p` in `ω = p Σ_γ ω_γ`.
    pub connection: f64,
}

impl TorsionTable {
    /// Closed-form torsion from evaluated partials (0-based indices).
    #[allow(clippy::needless_range_loop)]
    pub fn from_derivatives(point: Point, d: &Derivatives) -> Self {
        let n = d.grad.len();
        let mut c = vec![vec![0.0; n]; n];
        let mut total = 0.0;
        for a in 0..n {
            for b in (a + 1)..n {
                let v = -d.hess[a][b] / (d.grad[a] * d.grad[b]);
                c[a][b] = v;
                c[b][a] = v;
                total += 2.0 * v;
            }
        }
        let connection = total / (n * (n - 1)) as f64;
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = c[i][j] - connection;
                a[i][j] = v;
                a[j][i] = v;
            }
        }
        TorsionTable {
            point,
            a,
            connection,
        }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// `a_{αβ}` with 1-based indices.
    pub fn component(&self, alpha: usize, beta: usize) -> f64 {
        self.a[alpha - 1][beta - 1]
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `Σ_{α,β} a_{αβ}`.
    pub fn total(&self) -> f64 {
        self.a.iter().flatten().sum()
    }

    /// Magnitude used to make torsion differences relative:
    /// `max |a| + |p| + 1`, which bounds the raw `|c_{αβ}|` from above.
    pub fn scale(&self) -> f64 {
        self.max_abs() + self.connection.abs() + 1.0
    }
}

impl fmt::Display for TorsionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "torsion at {}", self.point)?;
        let n = self.n();
        write!(f, "{:>6}", "")?;
        for j in 1..=n {
            write!(f, " {:>14}", format!("{j}"))?;
        }
        writeln!(f)?;
        for i in 0..n {
            write!(f, "{:>6}", i + 1)?;
            for j in 0..n {
                write!(f, " {:>14.8}", self.a[i][j])?;
            }
            writeln!(f)?;
        }
        write!(f, "connection p = {:.8}", self.connection)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn web(text: &str, n: usize) -> WebSpec {
        WebSpec::new(n, parse(text).unwrap()).unwrap()
    }

    #[test]
    fn regularity_examples() {
        let w = web("x1+x2+x3", 3).with_margin(0.1).unwrap();
        assert!(w.is_regular(&[0.3, -0.2, 0.9]).unwrap());
        let w = web("x1*x2+x3+x4", 4).with_margin(0.1).unwrap();
        assert!(!w.is_regular(&[0.0, 1.0, 1.0, 1.0]).unwrap());
        let w = web("x1*x2*x3", 3).with_margin(0.5).unwrap();
        assert!(w.is_regular(&[1.0, 1.0, 1.0]).unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(WebSpec::new(1, parse("x1").unwrap()).is_err());
        assert!(WebSpec::new(2, parse("x1+x3").unwrap()).is_err());
        assert!(WebSpec::new(2, parse("x1+u1").unwrap()).is_err());
        assert!(web("x1+x2", 2).with_margin(0.0).is_err());
        assert!(web("x1+x2", 2).with_uniform_box(1.0, 1.0).is_err());
        assert!(matches!(
            web("x1+x2", 2).with_box(vec![Interval { lo: 0.0, hi: 1.0 }]),
            Err(WebError::Dimension { .. })
        ));
    }

    #[test]
    fn sampling_stays_in_box_and_is_deterministic() {
        let w = web("x1+x2", 2).with_uniform_box(0.0, 1.0).unwrap();
        let plan = SamplePlan::new(5, 7);
        let pts = w.sample(&plan).unwrap();
        assert_eq!(pts.len(), 5);
        for p in &pts {
            assert!(p.iter().all(|x| (0.0..=1.0).contains(x)));
            assert!(w.is_regular(p).unwrap());
        }
        assert_eq!(w.sample(&plan).unwrap(), pts);
        assert_ne!(w.sample(&SamplePlan::new(5, 8)).unwrap(), pts);
    }

    #[test]
    fn sampling_gives_up_on_nearly_singular_box() {
        let w = web("x1*x2", 2).with_margin(0.9).unwrap();
        let plan = SamplePlan {
            count: 50,
            seed: 1,
            max_rejections: 100,
        };
        assert!(matches!(
            w.sample(&plan),
            Err(WebError::Sampling { rejections: 100 })
        ));
        // |x_i| >= 1.5 is impossible inside [-1, 1]
        let w = web("x1*x2", 2).with_margin(1.5).unwrap();
        assert!(matches!(
            w.sample(&SamplePlan::default()),
            Err(WebError::Sampling { .. })
        ));
    }

    #[test]
    fn sampling_skips_points_outside_the_function_domain() {
        let w = web("log(x1)+x2", 2);
        let pts = w.sample(&SamplePlan::new(20, 3)).unwrap();
        assert!(pts.iter().all(|p| p[0] > 0.0));
    }

    #[test]
    fn parallel_web_has_zero_torsion() {
        let t = web("x1+x2+x3", 3).torsion(&[0.1, 0.2, 0.3]).unwrap();
        assert!(t.a.iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn torsion_of_bilinear_perturbation() {
        let t = web("x1+x2+x3+x1*x2", 3).torsion(&[0.0, 0.0, 0.0]).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() < 1e-15;
        assert!(close(t.component(1, 2), -2.0 / 3.0));
        assert!(close(t.component(1, 3), 1.0 / 3.0));
        assert!(close(t.component(2, 3), 1.0 / 3.0));
        assert_eq!(t.component(1, 1), 0.0);
    }

    #[test]
    fn product_web_has_equal_c_and_zero_torsion() {
        let t = web("x1*x2*x3", 3).torsion(&[1.0, 1.0, 1.0]).unwrap();
        assert!(t.max_abs() < 1e-15);
        assert!((t.connection + 1.0).abs() < 1e-15);
    }

    #[test]
    fn torsion_requires_regular_point() {
        let w = web("x1*x2+x3+x4", 4);
        assert!(matches!(
            w.torsion(&[0.0, 1.0, 1.0, 1.0]),
            Err(WebError::NotRegular { index: 2, .. })
        ));
        assert!(matches!(
            w.torsion(&[0.0, 1.0]),
            Err(WebError::Dimension { .. })
        ));
    }

    #[test]
    fn point_parsing() {
        assert_eq!(
            Point::parse("0, 0.5,-1").unwrap(),
            Point(vec![0.0, 0.5, -1.0])
        );
        assert!(Point::parse("").is_err());
        assert!(Point::parse("1,,2").is_err());
        assert!(Point::parse("1,nan").is_err());
    }
}
