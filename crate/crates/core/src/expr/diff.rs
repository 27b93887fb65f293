use super::simplify::{add, div, mul, neg, pow, sub, unary};
use super::{BinaryOp, Expr, UnaryOp, Var};

impl Expr {
    /// Exact partial derivative with respect to `x{idx}`.
    ///
    /// Slot variables `u*` are treated as independent of every `x`.
    pub fn diff(&self, idx: usize) -> Expr {
        assert!(idx >= 1, "variable indices start at 1");
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var(Var::X(i)) if *i == idx => Expr::one(),
            Expr::Var(_) => Expr::zero(),
            Expr::Unary(op, a) => {
                let da = a.diff(idx);
                if da.is_zero() {
                    return Expr::zero();
                }
                let a = (**a).clone();
                match op {
                    UnaryOp::Neg => neg(da),
                    UnaryOp::Sin => mul(da, unary(UnaryOp::Cos, a)),
                    UnaryOp::Cos => neg(mul(da, unary(UnaryOp::Sin, a))),
                    UnaryOp::Exp => mul(da, unary(UnaryOp::Exp, a)),
                    UnaryOp::Log => div(da, a),
                    UnaryOp::Sqrt => div(da, mul(Expr::Const(2.0), unary(UnaryOp::Sqrt, a))),
                }
            }
            Expr::Binary(op, a, b) => {
                let da = a.diff(idx);
                let db = b.diff(idx);
                let (a, b) = ((**a).clone(), (**b).clone());
                match op {
                    BinaryOp::Add => add(da, db),
                    BinaryOp::Sub => sub(da, db),
                    BinaryOp::Mul => add(mul(da, b), mul(a, db)),
                    BinaryOp::Div => {
                        if db.is_zero() {
                            div(da, b)
                        } else {
                            div(
                                sub(mul(da, b.clone()), mul(a, db)),
                                pow(b, Expr::Const(2.0)),
                            )
                        }
                    }
                    BinaryOp::Pow => {
                        if db.is_zero() {
                            // d(a^b) = b * a^(b-1) * a'  with b independent of x{idx}
                            if da.is_zero() {
                                return Expr::zero();
                            }
                            let lowered = pow(a, sub(b.clone(), Expr::one()));
                            mul(da, mul(b, lowered))
                        } else {
                            // d(a^b) = a^b * (b' log a + b a'/a)
                            let value = Expr::binary(BinaryOp::Pow, a.clone(), b.clone());
                            let log_term = mul(db, unary(UnaryOp::Log, a.clone()));
                            let base_term = div(mul(b, da), a);
                            mul(value, add(log_term, base_term))
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;

    fn d(text: &str, idx: usize) -> String {
        parse(text).unwrap().diff(idx).to_string()
    }

    #[test]
    fn product_and_chain_rules() {
        assert_eq!(d("x1*x2", 1), "x2");
        assert_eq!(d("sin(x1*x2)", 2), "x1*cos(x1*x2)");
        assert_eq!(d("x1^3", 1), "3*x1^2");
        assert_eq!(d("exp(x1)", 1), "exp(x1)");
        assert_eq!(d("log(x1)", 1), "1/x1");
        assert_eq!(d("cos(x2)", 2), "-sin(x2)");
    }

    #[test]
    fn independent_variable_gives_zero() {
        assert_eq!(d("sin(x1)*exp(x2)", 3), "0");
        assert_eq!(d("u1*x1", 2), "0");
        assert_eq!(d("7", 1), "0");
    }

    #[test]
    fn derivative_stays_in_grammar() {
        for text in ["x1^x2", "sqrt(x1*x2)/x1", "(x1+1)/(x2-3)", "-x1^-2"] {
            for idx in 1..=2 {
                let e = parse(text).unwrap().diff(idx);
                assert_eq!(parse(&e.to_string()).unwrap(), e, "{text} d/dx{idx}");
            }
        }
    }
}
