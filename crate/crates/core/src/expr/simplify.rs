//! Folding constructors.
//!
//! Each constructor folds constants (when the folded value is finite and
//! well defined) and applies the identities `0+e`, `e+0`, `e-0`, `0-e`,
//! `0*e`, `e*0`, `1*e`, `e*1`, `e/1`, `0/e`, `e^1`, `e^0`, `--e`. Nothing is
//! reordered, expanded or factored.

use super::eval::power;
use super::{BinaryOp, Expr, UnaryOp};

fn folded(v: f64) -> Option<Expr> {
    v.is_finite().then(|| Expr::constant(v))
}

pub fn neg(a: Expr) -> Expr {
    if let Some(c) = a.as_const() {
        return Expr::constant(-c);
    }
    match a {
        Expr::Unary(UnaryOp::Neg, inner) => *inner,
        other => Expr::unary(UnaryOp::Neg, other),
    }
}

pub fn unary(op: UnaryOp, a: Expr) -> Expr {
    if op == UnaryOp::Neg {
        return neg(a);
    }
    if let Some(c) = a.as_const() {
        let v = match op {
            UnaryOp::Sin => Some(c.sin()),
            UnaryOp::Cos => Some(c.cos()),
            UnaryOp::Exp => Some(c.exp()),
            UnaryOp::Log => (c > 0.0).then(|| c.ln()),
            UnaryOp::Sqrt => (c >= 0.0).then(|| c.sqrt()),
            UnaryOp::Neg => unreachable!(),
        };
        if let Some(e) = v.and_then(folded) {
            return e;
        }
    }
    Expr::unary(op, a)
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => folded(x + y).unwrap_or_else(|| Expr::binary(BinaryOp::Add, a, b)),
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => Expr::binary(BinaryOp::Add, a, b),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => folded(x - y).unwrap_or_else(|| Expr::binary(BinaryOp::Sub, a, b)),
        (Some(0.0), _) => neg(b),
        (_, Some(0.0)) => a,
        _ => Expr::binary(BinaryOp::Sub, a, b),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => folded(x * y).unwrap_or_else(|| Expr::binary(BinaryOp::Mul, a, b)),
        (Some(0.0), _) | (_, Some(0.0)) => Expr::zero(),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        (Some(-1.0), _) => neg(b),
        (_, Some(-1.0)) => neg(a),
        _ => Expr::binary(BinaryOp::Mul, a, b),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) if y != 0.0 => {
            folded(x / y).unwrap_or_else(|| Expr::binary(BinaryOp::Div, a, b))
        }
        (_, Some(1.0)) => a,
        (Some(0.0), _) => Expr::zero(),
        _ => Expr::binary(BinaryOp::Div, a, b),
    }
}

pub fn pow(a: Expr, b: Expr) -> Expr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => power(x, y)
            .and_then(folded)
            .unwrap_or_else(|| Expr::binary(BinaryOp::Pow, a, b)),
        (_, Some(1.0)) => a,
        (_, Some(0.0)) => Expr::one(),
        _ => Expr::binary(BinaryOp::Pow, a, b),
    }
}

pub fn binary(op: BinaryOp, a: Expr, b: Expr) -> Expr {
    match op {
        BinaryOp::Add => add(a, b),
        BinaryOp::Sub => sub(a, b),
        BinaryOp::Mul => mul(a, b),
        BinaryOp::Div => div(a, b),
        BinaryOp::Pow => pow(a, b),
    }
}

/// Rebuild a tree bottom-up through the folding constructors.
pub fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) | Expr::Var(_) => e.clone(),
        Expr::Unary(op, a) => unary(*op, simplify(a)),
        Expr::Binary(op, a, b) => binary(*op, simplify(a), simplify(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn s(text: &str) -> String {
        simplify(&parse(text).unwrap()).to_string()
    }

    #[test]
    fn identities() {
        assert_eq!(s("0*x1 + x2"), "x2");
        assert_eq!(s("x1*1 - 0"), "x1");
        assert_eq!(s("0 - x1"), "-x1");
        assert_eq!(s("x1^1 + x2^0"), "x1+1");
        assert_eq!(s("--x1"), "x1");
        assert_eq!(s("0/x1"), "0");
        assert_eq!(s("x1/1"), "x1");
        assert_eq!(s("-1*x1"), "-x1");
    }

    #[test]
    fn constant_folding() {
        assert_eq!(s("2*3 + 1"), "7");
        assert_eq!(s("2 - 5"), "-3");
        assert_eq!(s("exp(0)"), "1");
        assert_eq!(s("(2-5)*x1"), "-3*x1");
    }

    #[test]
    fn leaves_undefined_constants_alone() {
        assert_eq!(s("1/0"), "1/0");
        assert_eq!(s("log(0)"), "log(0)");
        assert_eq!(s("(0-4)^0.5"), "-4^0.5");
    }

    #[test]
    fn no_reordering() {
        assert_eq!(s("x2 + x1"), "x2+x1");
        assert_eq!(s("(x1+x2)*(x1+x2)"), "(x1+x2)*(x1+x2)");
    }
}
