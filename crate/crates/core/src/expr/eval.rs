use thiserror::Error;

use super::{BinaryOp, Expr, UnaryOp, Var};

/// Evaluation failure. The `expr` fields carry the printed offending
/// subexpression.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero in `{expr}`")]
    DivisionByZero { expr: String },
    #[error("`{expr}` is outside the domain of {function} (argument {arg})")]
    Domain {
        function: &'static str,
        expr: String,
        arg: f64,
    },
    #[error("non-finite value produced by `{expr}`")]
    NonFinite { expr: String },
    #[error("point has {len} coordinates but `{var}` is referenced")]
    MissingVariable { var: Var, len: usize },
    #[error("slot `{var}` must be substituted before evaluation")]
    UnboundSlot { var: Var },
}

impl Expr {
    /// Evaluate at a point; `point[i - 1]` is the value of `x{i}`.
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        let value = match self {
            Expr::Const(c) => *c,
            Expr::Var(Var::X(i)) => *point.get(i - 1).ok_or(EvalError::MissingVariable {
                var: Var::X(*i),
                len: point.len(),
            })?,
            Expr::Var(var @ Var::U(_)) => return Err(EvalError::UnboundSlot { var: *var }),
            Expr::Unary(op, arg) => {
                let v = arg.eval(point)?;
                match op {
                    UnaryOp::Neg => -v,
                    UnaryOp::Sin => v.sin(),
                    UnaryOp::Cos => v.cos(),
                    UnaryOp::Exp => v.exp(),
                    UnaryOp::Log => {
                        if v <= 0.0 {
                            return Err(self.domain("log", v));
                        }
                        v.ln()
                    }
                    UnaryOp::Sqrt => {
                        if v < 0.0 {
                            return Err(self.domain("sqrt", v));
                        }
                        v.sqrt()
                    }
                }
            }
            Expr::Binary(op, lhs, rhs) => {
                let a = lhs.eval(point)?;
                let b = rhs.eval(point)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == 0.0 {
                            return Err(EvalError::DivisionByZero {
                                expr: self.to_string(),
                            });
                        }
                        a / b
                    }
                    BinaryOp::Pow => power(a, b).ok_or_else(|| {
                        if a == 0.0 {
                            EvalError::DivisionByZero {
                                expr: self.to_string(),
                            }
                        } else {
                            self.domain("pow", a)
                        }
                    })?,
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError::NonFinite {
                expr: self.to_string(),
            })
        }
    }

    fn domain(&self, function: &'static str, arg: f64) -> EvalError {
        EvalError::Domain {
            function,
            expr: self.to_string(),
            arg,
        }
    }
}

/// `base^exponent` with integer exponents unrestricted and non-integer
/// exponents requiring a positive base. `None` marks a domain violation.
pub(crate) fn power(base: f64, exponent: f64) -> Option<f64> {
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        if base == 0.0 && exponent < 0.0 {
            return None;
        }
        Some(base.powi(exponent as i32))
    } else if base > 0.0 {
        Some(base.powf(exponent))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn eval(s: &str, pt: &[f64]) -> Result<f64, EvalError> {
        parse(s).unwrap().eval(pt)
    }

    #[test]
    fn arithmetic() {
        assert_eq!(eval("x1 + x2*x3", &[1.0, 2.0, 3.0]), Ok(7.0));
        assert_eq!(eval("log(x1)", &[1.0]), Ok(0.0));
        assert_eq!(eval("2^3^2", &[]), Ok(512.0));
        assert_eq!(eval("-x1^2", &[3.0]), Ok(9.0));
        assert_eq!(eval("-(x1^2)", &[3.0]), Ok(-9.0));
        assert_eq!(eval("x1^0.5", &[4.0]), Ok(2.0));
        assert_eq!(eval("x1^-2", &[-2.0]), Ok(0.25));
    }

    #[test]
    fn division_by_zero_names_subexpression() {
        let err = eval("x1/x2", &[1.0, 0.0]).unwrap_err();
        assert_eq!(
            err,
            EvalError::DivisionByZero {
                expr: "x1/x2".into()
            }
        );
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            eval("1 + log(x1 - 1)", &[1.0]),
            Err(EvalError::Domain { function: "log", ref expr, .. }) if expr == "log(x1-1)"
        ));
        assert!(matches!(
            eval("sqrt(x1)", &[-1.0]),
            Err(EvalError::Domain {
                function: "sqrt",
                ..
            })
        ));
        assert_eq!(eval("sqrt(x1)", &[0.0]), Ok(0.0));
        assert!(matches!(
            eval("x1^0.5", &[-4.0]),
            Err(EvalError::Domain {
                function: "pow",
                ..
            })
        ));
        assert!(matches!(
            eval("x1^-1", &[0.0]),
            Err(EvalError::DivisionByZero { .. })
        ));
        assert!(matches!(
            eval("exp(x1)", &[1000.0]),
            Err(EvalError::NonFinite { .. })
        ));
    }

    #[test]
    fn unbound_slots_and_missing_coordinates() {
        assert!(matches!(
            eval("u1 + x1", &[1.0]),
            Err(EvalError::UnboundSlot { .. })
        ));
        assert!(matches!(
            eval("x3", &[1.0, 2.0]),
            Err(EvalError::MissingVariable { len: 2, .. })
        ));
    }

    #[test]
    fn evaluation_is_bit_identical() {
        let e = parse("sin(x1*x2)^2 + exp(x3)/sqrt(x1+2) - log(x2+3)").unwrap();
        let pt = [0.3, -0.7, 1.1];
        let a = e.eval(&pt).unwrap();
        for _ in 0..10 {
            assert_eq!(e.eval(&pt).unwrap().to_bits(), a.to_bits());
        }
    }
}
