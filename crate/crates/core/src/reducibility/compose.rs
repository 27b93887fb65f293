use thiserror::Error;

use super::partition::RolePartition;
use crate::expr::{Expr, Var};
use crate::web::{WebError, WebSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComposeError {
    #[error("f has {arity} slots (u1..u{arity}) but references `{var}`")]
    Arity { var: Var, arity: usize },
    #[error("f must only use slots u1..u{arity}, found `{var}`")]
    CoordinateInOuter { var: Var, arity: usize },
    #[error("g may only use variables of the A and S blocks, found `{var}`")]
    OutsideBlocks { var: Var },
    #[error(transparent)]
    Web(#[from] WebError),
}

/// Build `F = f(x_P, g(x_A, x_S), x_S)`.
///
/// Slot layout of `f`: `u1..u_l` take the P variables in increasing order,
/// `u_{l+1}` takes the value of `g`, and `u_{l+2}..` take the S variables in
/// increasing order, so `f` has `l + 1 + (n − k)` slots. `g` is written
/// directly over the `x` variables of `A ∪ S`.
pub fn compose(f: &Expr, g: &Expr, part: &RolePartition) -> Result<WebSpec, ComposeError> {
    let l = part.l();
    let arity = l + 1 + part.s().len();
    for var in f.variables() {
        match var {
            Var::U(i) if i > arity => return Err(ComposeError::Arity { var, arity }),
            Var::X(_) => return Err(ComposeError::CoordinateInOuter { var, arity }),
            _ => {}
        }
    }
    for var in g.variables() {
        let allowed = match var {
            Var::X(i) => part.a().contains(&i) || part.s().contains(&i),
            Var::U(_) => false,
        };
        if !allowed {
            return Err(ComposeError::OutsideBlocks { var });
        }
    }
    let function = f.substitute(&|var| match var {
        Var::U(i) if i <= l => Some(Expr::x(part.p()[i - 1])),
        Var::U(i) if i == l + 1 => Some(g.clone()),
        Var::U(i) => Some(Expr::x(part.s()[i - l - 2])),
        Var::X(_) => None,
    });
    Ok(WebSpec::new(part.n(), function)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn part() -> RolePartition {
        RolePartition::new(4, &[1], &[2, 3]).unwrap()
    }

    #[test]
    fn substitutes_slots() {
        let web = compose(
            &parse("u1*u2").unwrap(),
            &parse("(x2+x3)*x4").unwrap(),
            &part(),
        )
        .unwrap();
        assert_eq!(web.function().to_string(), "x1*((x2+x3)*x4)");
        assert_eq!(web.n(), 4);
    }

    #[test]
    fn fixed_block_slots_follow_g_slot() {
        let part = RolePartition::new(5, &[2], &[1, 4]).unwrap();
        let web = compose(
            &parse("u1*u2 + u3 - u4").unwrap(),
            &parse("x1*x4 + x3").unwrap(),
            &part,
        )
        .unwrap();
        assert_eq!(web.function().to_string(), "x2*(x1*x4+x3)+x3-x5");
    }

    #[test]
    fn arity_and_block_errors() {
        let g = parse("x2+x3").unwrap();
        assert!(matches!(
            compose(&parse("u1*u4").unwrap(), &g, &part()),
            Err(ComposeError::Arity { arity: 3, .. })
        ));
        assert!(matches!(
            compose(&parse("u1*x2").unwrap(), &g, &part()),
            Err(ComposeError::CoordinateInOuter { .. })
        ));
        assert!(matches!(
            compose(&parse("u1*u2").unwrap(), &parse("x1+x2").unwrap(), &part()),
            Err(ComposeError::OutsideBlocks { var: Var::X(1) })
        ));
        assert!(matches!(
            compose(&parse("u1*u2").unwrap(), &parse("u1+x2").unwrap(), &part()),
            Err(ComposeError::OutsideBlocks { .. })
        ));
    }
}
