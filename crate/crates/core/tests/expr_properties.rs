use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use webtorsion::expr::{parse, BinaryOp, Expr, ParseErrorKind, UnaryOp, MAX_DEPTH};
use webtorsion_testkit::fd::{central_first, richardson_second};
use webtorsion_testkit::gen::{arb_expr, arb_smooth_expr, random_expr};
use webtorsion_testkit::rel_diff;

#[test]
fn grammar_examples() {
    assert_eq!(
        parse("x1 + x2*x3").unwrap(),
        Expr::binary(
            BinaryOp::Add,
            Expr::x(1),
            Expr::binary(BinaryOp::Mul, Expr::x(2), Expr::x(3))
        )
    );
    assert_eq!(
        parse("sin(x1)^2").unwrap(),
        Expr::binary(
            BinaryOp::Pow,
            Expr::unary(UnaryOp::Sin, Expr::x(1)),
            Expr::Const(2.0)
        )
    );
    assert_eq!(parse("  x1\t+ x2 ").unwrap(), parse("x1+x2").unwrap());
    assert_eq!(parse("1.5e-3").unwrap(), Expr::Const(1.5e-3));
    assert_eq!(parse("2E+2").unwrap(), Expr::Const(200.0));
}

#[test]
fn syntax_error_positions() {
    let err = parse("x1 +").unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
    assert_eq!(err.position, 5);
    assert_eq!(parse("x1 + * x2").unwrap_err().position, 6);
    assert_eq!(parse("(x1 + x2").unwrap_err().position, 9);
    assert_eq!(parse("x1 x2").unwrap_err().position, 4);
    assert_eq!(parse("x1 # 2").unwrap_err().position, 4);
    assert_eq!(parse("1.").unwrap_err().position, 3);
    assert_eq!(parse("").unwrap_err().position, 1);
}

#[test]
fn identifier_and_arity_errors() {
    let err = parse("y1 + 2").unwrap_err();
    assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("y1".into()));
    assert_eq!(err.position, 1);
    assert!(matches!(
        parse("tan(x1)").unwrap_err().kind,
        ParseErrorKind::UnknownIdentifier(_)
    ));
    assert!(matches!(
        parse("x0").unwrap_err().kind,
        ParseErrorKind::UnknownIdentifier(_)
    ));
    assert!(matches!(
        parse("sin(x1, x2)").unwrap_err().kind,
        ParseErrorKind::Arity(_)
    ));
    assert!(matches!(
        parse("sin()").unwrap_err().kind,
        ParseErrorKind::Arity(_)
    ));
    assert!(matches!(
        parse("sin x1").unwrap_err().kind,
        ParseErrorKind::Arity(_)
    ));
    assert!(matches!(
        parse("x1(x2)").unwrap_err().kind,
        ParseErrorKind::Arity(_)
    ));
}

#[test]
fn deep_input_is_rejected_not_overflowed() {
    let nested = format!("{}x1{}", "(".repeat(10_000), ")".repeat(10_000));
    assert_eq!(parse(&nested).unwrap_err().kind, ParseErrorKind::TooDeep);
    let chain = vec!["x1"; 5_000].join("+");
    assert_eq!(parse(&chain).unwrap_err().kind, ParseErrorKind::TooDeep);
    let negs = format!("{}x1", "-".repeat(5_000));
    assert_eq!(parse(&negs).unwrap_err().kind, ParseErrorKind::TooDeep);
    let ok = vec!["x1"; MAX_DEPTH].join("+");
    assert!(parse(&ok).is_ok());
}

proptest! {
    #[test]
    fn print_parse_round_trip(e in arb_expr(4, 4)) {
        let printed = e.to_string();
        let back = parse(&printed).unwrap();
        prop_assert_eq!(back, e, "printed as {}", printed);
    }

    #[test]
    fn derivatives_stay_in_grammar(e in arb_expr(3, 4), idx in 1usize..=3) {
        let d = e.diff(idx);
        prop_assert_eq!(parse(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn evaluation_is_pure(e in arb_smooth_expr(3, 4), pt in prop::array::uniform3(-1.0..1.0f64)) {
        let first = e.eval(&pt);
        let second = e.eval(&pt);
        match (first, second) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
            (a, b) => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn first_partials_match_finite_differences(
        e in arb_smooth_expr(3, 4),
        pt in prop::array::uniform3(-1.0..1.0f64),
        idx in 1usize..=3,
    ) {
        let value = e.eval(&pt);
        prop_assume!(matches!(value, Ok(v) if v.abs() < 1e3));
        let f = |x: &[f64]| e.eval(x).ok();
        let fd = central_first(&f, &pt, idx - 1, 1e-5);
        let sym = e.diff(idx).eval(&pt);
        prop_assume!(fd.is_some() && sym.is_ok());
        let (fd, sym) = (fd.unwrap(), sym.unwrap());
        prop_assume!(sym.abs() < 1e3);
        prop_assert!(rel_diff(sym, fd) <= 1e-6, "{} d/dx{}: {} vs {}", e, idx, sym, fd);
    }

    #[test]
    fn mixed_partials_commute(
        e in arb_smooth_expr(3, 4),
        pt in prop::array::uniform3(-1.0..1.0f64),
        i in 1usize..=3,
        j in 1usize..=3,
    ) {
        let ij = e.diff(i).diff(j).eval(&pt);
        let ji = e.diff(j).diff(i).eval(&pt);
        prop_assume!(ij.is_ok() && ji.is_ok());
        let (ij, ji) = (ij.unwrap(), ji.unwrap());
        prop_assert!(rel_diff(ij, ji) <= 1e-9, "{}: {} vs {}", e, ij, ji);
    }
}

/// 100 fixed random (expression, point) pairs with admissible values.
fn fixed_cases() -> Vec<(Expr, [f64; 3])> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut cases = Vec::new();
    while cases.len() < 100 {
        let e = random_expr(&mut rng, 5, 3);
        let pt: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let ok = |v: Result<f64, _>| matches!(v, Ok(x) if f64::abs(x) < 1e3);
        let admissible = ok(e.eval(&pt))
            && (1..=3).all(|i| ok(e.diff(i).eval(&pt)))
            && (1..=3).all(|i| (1..=3).all(|j| ok(e.diff(i).diff(j).eval(&pt))));
        if admissible && e.variables().len() >= 2 {
            cases.push((e, pt));
        }
    }
    cases
}

#[test]
fn second_partials_match_richardson_differences() {
    for (e, pt) in fixed_cases() {
        let f = |x: &[f64]| e.eval(x).ok();
        for i in 1..=3 {
            for j in i..=3 {
                let Some(fd) = richardson_second(&f, &pt, i - 1, j - 1, 1e-3) else {
                    continue;
                };
                let sym = e.diff(i).diff(j).eval(&pt).unwrap();
                assert!(
                    rel_diff(sym, fd) <= 1e-5,
                    "{e} d{i}d{j} at {pt:?}: {sym} vs {fd}"
                );
            }
        }
    }
}
