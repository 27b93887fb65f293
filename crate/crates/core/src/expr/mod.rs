//! Scalar multivariate expressions over positional variables `x1..xn`.
//!
//! Expressions are immutable trees. The parser builds them verbatim (no
//! rewriting), so printing and re-parsing reproduces the same tree. The
//! differentiator goes through the folding constructors in [`simplify`],
//! which apply constant folding and the additive/multiplicative identities
//! and nothing else.

mod diff;
mod eval;
mod parse;
pub mod simplify;

use std::fmt;

pub use eval::EvalError;
pub use parse::{parse, ParseError, ParseErrorKind, MAX_DEPTH};

/// A variable reference. `X` indices address coordinates of a point; `U`
/// indices are composition slots and must be substituted away before
/// evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(usize),
    U(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::U(i) => write!(f, "u{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl UnaryOp {
    /// Function name as written in the grammar; `None` for negation.
    pub fn name(self) -> Option<&'static str> {
        match self {
            UnaryOp::Neg => None,
            UnaryOp::Sin => Some("sin"),
            UnaryOp::Cos => Some("cos"),
            UnaryOp::Exp => Some("exp"),
            UnaryOp::Log => Some("log"),
            UnaryOp::Sqrt => Some("sqrt"),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "sin" => Some(UnaryOp::Sin),
            "cos" => Some(UnaryOp::Cos),
            "exp" => Some(UnaryOp::Exp),
            "log" => Some(UnaryOp::Log),
            "sqrt" => Some(UnaryOp::Sqrt),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

/// Expression tree node.
///
/// Constants held in `Const` are finite and non-negative; a negative value
/// is represented as `Neg(Const(..))`, which is what the grammar produces
/// for `-2`. Use [`Expr::constant`] to build one from an arbitrary value.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Coordinate variable `x{idx}`.
    ///
    /// Panics if `idx == 0`; variable indices are 1-based.
    pub fn x(idx: usize) -> Expr {
        assert!(idx >= 1, "variable indices start at 1");
        Expr::Var(Var::X(idx))
    }

    /// Composition slot `u{idx}`. Panics if `idx == 0`.
    pub fn u(idx: usize) -> Expr {
        assert!(idx >= 1, "slot indices start at 1");
        Expr::Var(Var::U(idx))
    }

    /// Constant node for any finite value, normalising negatives to
    /// `Neg(Const(|v|))`.
    pub fn constant(v: f64) -> Expr {
        debug_assert!(v.is_finite());
        if v < 0.0 {
            Expr::Unary(UnaryOp::Neg, Box::new(Expr::Const(-v)))
        } else {
            // folds -0.0 into 0.0
            Expr::Const(v + 0.0)
        }
    }

    pub fn zero() -> Expr {
        Expr::Const(0.0)
    }

    pub fn one() -> Expr {
        Expr::Const(1.0)
    }

    /// Unsimplified unary node.
    pub fn unary(op: UnaryOp, arg: Expr) -> Expr {
        Expr::Unary(op, Box::new(arg))
    }

    /// Unsimplified binary node.
    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// Numeric value if the node is a constant or a negated constant.
    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            Expr::Unary(UnaryOp::Neg, inner) => match **inner {
                Expr::Const(c) => Some(-c),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn is_one(&self) -> bool {
        self.as_const() == Some(1.0)
    }

    /// Depth of the tree; a single leaf has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Unary(_, a) => 1 + a.depth(),
            Expr::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Visit every variable occurrence.
    pub fn for_each_var(&self, f: &mut impl FnMut(Var)) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => f(*v),
            Expr::Unary(_, a) => a.for_each_var(f),
            Expr::Binary(_, a, b) => {
                a.for_each_var(f);
                b.for_each_var(f);
            }
        }
    }

    /// Sorted, deduplicated list of variables occurring in the expression.
    pub fn variables(&self) -> Vec<Var> {
        let mut vars = Vec::new();
        self.for_each_var(&mut |v| vars.push(v));
        vars.sort();
        vars.dedup();
        vars
    }

    /// Largest `x` index referenced, or 0 when there is none.
    pub fn max_x_index(&self) -> usize {
        let mut max = 0;
        self.for_each_var(&mut |v| {
            if let Var::X(i) = v {
                max = max.max(i);
            }
        });
        max
    }

    pub fn contains_var(&self, var: Var) -> bool {
        let mut found = false;
        self.for_each_var(&mut |v| found |= v == var);
        found
    }

    /// Replace variables by expressions. Variables for which `f` returns
    /// `None` are kept. No simplification is applied.
    pub fn substitute(&self, f: &impl Fn(Var) -> Option<Expr>) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(v) => f(*v).unwrap_or(Expr::Var(*v)),
            Expr::Unary(op, a) => Expr::unary(*op, a.substitute(f)),
            Expr::Binary(op, a, b) => Expr::binary(*op, a.substitute(f), b.substitute(f)),
        }
    }

    /// Precedence level used by the printer: higher binds tighter.
    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
            Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
            Expr::Binary(BinaryOp::Pow, ..) => 3,
            // `- base`, calls, atoms are all `base` in the grammar
            _ => 4,
        }
    }

    fn fmt_with_min(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            f.write_str("(")?;
            self.fmt_bare(f)?;
            f.write_str(")")
        } else {
            self.fmt_bare(f)
        }
    }

    fn fmt_bare(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Unary(UnaryOp::Neg, a) => {
                f.write_str("-")?;
                a.fmt_with_min(f, 4)
            }
            Expr::Unary(op, a) => {
                write!(f, "{}(", op.name().unwrap_or_default())?;
                a.fmt_bare(f)?;
                f.write_str(")")
            }
            Expr::Binary(op, a, b) => {
                // left-associative + - * /, right-associative ^
                let (lmin, rmin) = match op {
                    BinaryOp::Add | BinaryOp::Sub => (1, 2),
                    BinaryOp::Mul | BinaryOp::Div => (2, 3),
                    BinaryOp::Pow => (4, 3),
                };
                a.fmt_with_min(f, lmin)?;
                write!(f, "{}", op.symbol())?;
                b.fmt_with_min(f, rmin)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_bare(f)
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
