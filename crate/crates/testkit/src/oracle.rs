//! Torsion of a codimension-one web by solving the structure equations as a
//! linear system, with every derivative taken by finite differences.
//!
//! Unknowns are the symmetric torsion components `a_{αβ}` (α < β) and a
//! fully general connection form `ω = Σ_γ p_γ ω_γ`. Each ordered pair
//! α ≠ β contributes the coefficient match `a_{αβ} + p_β = c_{αβ}`, where
//! `c_{αβ}` is the coefficient of `ω_α ∧ ω_β` in `dω_α`; the zero-sum
//! condition closes the system. The overdetermined system is solved in the
//! least-squares sense and the residual is reported, so an inconsistent
//! ansatz would show up instead of being absorbed.

use nalgebra::{DMatrix, DVector};
use webtorsion::expr::Expr;

use crate::fd::{richardson_first, richardson_second};

/// Step used for the Richardson-extrapolated stencils.
pub const ORACLE_STEP: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct OracleTorsion {
    /// `n × n`, zero diagonal.
    pub a: Vec<Vec<f64>>,
    /// Connection coefficients `p_γ`.
    pub p: Vec<f64>,
    /// Least-squares residual norm of the linear system.
    pub residual: f64,
}

/// Coefficients `c_{αβ}` of `dω_α = Σ_{β≠α} c_{αβ} ω_α ∧ ω_β` for the
/// co-frame `ω_α = F_α dx_α`, from finite differences of `F`.
pub fn structure_coefficients(f: &Expr, pt: &[f64]) -> Option<Vec<Vec<f64>>> {
    let n = pt.len();
    let eval = |x: &[f64]| f.eval(x).ok();
    let grad: Vec<f64> = (0..n)
        .map(|i| richardson_first(&eval, pt, i, ORACLE_STEP))
        .collect::<Option<_>>()?;
    let mut c = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            // dω_α = Σ_β F_{αβ} dx_β ∧ dx_α = Σ_β F_{αβ}/(F_α F_β) ω_β ∧ ω_α
            let mixed = richardson_second(&eval, pt, a, b, ORACLE_STEP)?;
            c[a][b] = -mixed / (grad[a] * grad[b]);
        }
    }
    Some(c)
}

/// Solve the structure equations for `(a, p)` at `pt`.
pub fn torsion_by_linear_system(f: &Expr, pt: &[f64]) -> Option<OracleTorsion> {
    let n = pt.len();
    let c = structure_coefficients(f, pt)?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .collect();
    let unknowns = pairs.len() + n;
    let rows = n * (n - 1) + 1;
    let mut m = DMatrix::<f64>::zeros(rows, unknowns);
    let mut rhs = DVector::<f64>::zeros(rows);
    let pair_col = |a: usize, b: usize| {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        pairs.iter().position(|&q| q == (lo, hi)).unwrap()
    };
    let mut row = 0;
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            m[(row, pair_col(a, b))] = 1.0;
            m[(row, pairs.len() + b)] = 1.0;
            rhs[row] = c[a][b];
            row += 1;
        }
    }
    // Σ_{α≠β} a_{αβ} = 2 Σ_{α<β} a_{αβ} = 0
    for col in 0..pairs.len() {
        m[(row, col)] = 2.0;
    }
    let svd = m.clone().svd(true, true);
    let sol = svd.solve(&rhs, 1e-12).ok()?;
    let residual = (&m * &sol - &rhs).norm();
    let mut a = vec![vec![0.0; n]; n];
    for (col, &(x, y)) in pairs.iter().enumerate() {
        a[x][y] = sol[col];
        a[y][x] = sol[col];
    }
    let p = (0..n).map(|g| sol[pairs.len() + g]).collect();
    Some(OracleTorsion { a, p, residual })
}
