//! Random expression generators.

use proptest::prelude::*;
use rand::Rng;
use webtorsion::expr::{BinaryOp, Expr, UnaryOp};

const UNARY: [UnaryOp; 6] = [
    UnaryOp::Neg,
    UnaryOp::Sin,
    UnaryOp::Cos,
    UnaryOp::Exp,
    UnaryOp::Log,
    UnaryOp::Sqrt,
];

const BINARY: [BinaryOp; 5] = [
    BinaryOp::Add,
    BinaryOp::Sub,
    BinaryOp::Mul,
    BinaryOp::Div,
    BinaryOp::Pow,
];

fn constant(rng: &mut impl Rng) -> Expr {
    // two decimals keeps printed constants short
    Expr::Const((rng.random_range(0.0..3.0_f64) * 100.0).round() / 100.0)
}

/// Random tree of depth at most `depth` over `x1..x{nvars}` using the full
/// operation set. Powers get a small integer exponent most of the time.
pub fn random_expr(rng: &mut impl Rng, depth: usize, nvars: usize) -> Expr {
    if depth <= 1 || rng.random_bool(0.25) {
        return if rng.random_bool(0.75) {
            Expr::x(rng.random_range(1..=nvars))
        } else {
            constant(rng)
        };
    }
    if rng.random_bool(0.3) {
        let op = UNARY[rng.random_range(0..UNARY.len())];
        Expr::unary(op, random_expr(rng, depth - 1, nvars))
    } else {
        let op = BINARY[rng.random_range(0..BINARY.len())];
        let lhs = random_expr(rng, depth - 1, nvars);
        let rhs = if op == BinaryOp::Pow && rng.random_bool(0.7) {
            Expr::Const(rng.random_range(2..=3) as f64)
        } else {
            random_expr(rng, depth - 1, nvars)
        };
        Expr::binary(op, lhs, rhs)
    }
}

/// Random polynomial tree (add/sub/mul over variables and constants).
pub fn random_polynomial(rng: &mut impl Rng, depth: usize, nvars: usize) -> Expr {
    if depth <= 1 || rng.random_bool(0.2) {
        return if rng.random_bool(0.8) {
            Expr::x(rng.random_range(1..=nvars))
        } else {
            constant(rng)
        };
    }
    let op = [BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul][rng.random_range(0..3)];
    Expr::binary(
        op,
        random_polynomial(rng, depth - 1, nvars),
        random_polynomial(rng, depth - 1, nvars),
    )
}

/// Web function `Σ k_i x_i + P(x)` with `k_i ∈ [1, 2]` and `P` a random
/// polynomial of depth at most 4, so every variable occurs.
pub fn random_polynomial_web(rng: &mut impl Rng, n: usize) -> Expr {
    let mut f = random_polynomial(rng, 4, n);
    for i in 1..=n {
        let k = (rng.random_range(1.0..2.0_f64) * 100.0).round() / 100.0;
        f = Expr::binary(
            BinaryOp::Add,
            f,
            Expr::binary(BinaryOp::Mul, Expr::Const(k), Expr::x(i)),
        );
    }
    f
}

/// Proptest strategy for arbitrary trees (depth ≤ `depth`) over
/// `x1..x{nvars}`, `u1..u2` and non-negative constants.
pub fn arb_expr(nvars: usize, depth: u32) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (1..=nvars).prop_map(Expr::x),
        (1usize..=2).prop_map(Expr::u),
        (0.0..100.0f64).prop_map(Expr::Const),
        (0u32..20).prop_map(|v| Expr::Const(v as f64)),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            (0..UNARY.len(), inner.clone()).prop_map(|(i, e)| Expr::unary(UNARY[i], e)),
            (0..BINARY.len(), inner.clone(), inner)
                .prop_map(|(i, a, b)| Expr::binary(BINARY[i], a, b)),
        ]
    })
}

/// Proptest strategy for smooth-ish trees over `x1..x{nvars}` only.
pub fn arb_smooth_expr(nvars: usize, depth: u32) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        3 => (1..=nvars).prop_map(Expr::x),
        1 => (0.1..3.0f64).prop_map(Expr::Const),
    ];
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            (0..UNARY.len(), inner.clone()).prop_map(|(i, e)| Expr::unary(UNARY[i], e)),
            (0..4usize, inner.clone(), inner.clone())
                .prop_map(|(i, a, b)| Expr::binary(BINARY[i], a, b)),
            (inner, 2u32..=3).prop_map(|(a, k)| Expr::binary(
                BinaryOp::Pow,
                a,
                Expr::Const(k as f64)
            )),
        ]
    })
}
