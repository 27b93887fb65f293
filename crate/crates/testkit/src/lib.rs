//! Test support for webtorsion: finite-difference and linear-algebra
//! oracles that only ever *evaluate* expressions (never differentiate them
//! symbolically), random expression generators, and the reference corpus of
//! webs.

pub mod corpus;
pub mod fd;
pub mod gen;
pub mod oracle;

/// `|x − y| / max(|x|, |y|, 1)`.
pub fn rel_diff(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(1.0)
}
