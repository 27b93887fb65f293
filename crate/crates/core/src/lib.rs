//! Verification toolkit for codimension-one `(n+1)`-webs given in closed
//! form `x_{n+1} = F(x_1, …, x_n)`.
//!
//! Given a web and a partition of its variables into roles `P`, `A`, `S`,
//! the crate decides whether `F` nests as `f(x_P, g(x_A, x_S), x_S)` using
//! three independent sampled criteria: equalities between torsion
//! components, a system of second-order PDE residuals, and Frobenius
//! integrability of an associated distribution. It also builds such webs by
//! composition.
//!
//! ```
//! use webtorsion::expr::parse;
//! use webtorsion::reducibility::{check_pde, RolePartition, Verdict};
//! use webtorsion::web::{SamplePlan, WebSpec};
//!
//! let web = WebSpec::new(4, parse("x1*(x2+x3)*x4").unwrap()).unwrap();
//! let part = RolePartition::new(4, &[1], &[2, 3]).unwrap();
//! let report = check_pde(&web, &part, &SamplePlan::default()).unwrap();
//! assert_eq!(report.verdict, Verdict::Reducible);
//! ```

pub mod expr;
pub mod frobenius;
pub mod presets;
pub mod reducibility;
pub mod web;

pub use expr::{parse, Expr};
pub use reducibility::{RolePartition, Verdict};
pub use web::{Point, SamplePlan, TorsionTable, WebSpec};
