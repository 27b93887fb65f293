use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use webtorsion::expr::{parse, Expr, Var};
use webtorsion::frobenius::{
    annihilation, build_frame, check_integrability, lie_bracket, Integrability,
};
use webtorsion::reducibility::{
    check_full, check_pde, check_subweb, compose, residual_pde, scan, RolePartition, Verdict,
};
use webtorsion::web::{SamplePlan, WebSpec};
use webtorsion_testkit::corpus::{corpus, Kind};
use webtorsion_testkit::gen::random_polynomial_web;
use webtorsion_testkit::oracle::torsion_by_linear_system;

fn web(text: &str, n: usize) -> WebSpec {
    WebSpec::new(n, parse(text).unwrap()).unwrap()
}

fn integrable(i: Integrability) -> Verdict {
    match i {
        Integrability::Integrable => Verdict::Reducible,
        Integrability::NotIntegrable => Verdict::NotReducible,
        Integrability::Inconclusive => Verdict::Inconclusive,
    }
}

fn rename(e: &Expr, map: impl Fn(usize) -> Var) -> Expr {
    e.substitute(&|v| match v {
        Var::X(i) => Some(Expr::Var(map(i))),
        Var::U(_) => None,
    })
}

#[test]
fn criteria_agree_on_every_partition_of_the_corpus() {
    let plan = SamplePlan::default();
    for entry in corpus() {
        let n = entry.web.n();
        for part in RolePartition::enumerate(n, n) {
            let torsion = check_subweb(&entry.web, &part, &plan).unwrap().verdict;
            let pde = check_pde(&entry.web, &part, &plan).unwrap().verdict;
            let frob = integrable(
                check_integrability(&entry.web, &part, &plan, false)
                    .unwrap()
                    .verdict,
            );
            assert_ne!(pde, Verdict::Inconclusive, "{} {part}", entry.name);
            assert_eq!(torsion, pde, "{} {part}", entry.name);
            assert_eq!(frob, pde, "{} {part}", entry.name);
        }
        let headline = check_pde(&entry.web, entry.partition(), &plan)
            .unwrap()
            .verdict;
        let expected = if entry.is_composed() {
            Verdict::Reducible
        } else {
            Verdict::NotReducible
        };
        assert_eq!(headline, expected, "{}", entry.name);
    }
}

#[test]
fn random_compositions_are_reducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let plan = SamplePlan::new(20, 3);
    let mut done = 0;
    let mut attempts = 0;
    while done < 20 {
        attempts += 1;
        assert!(attempts < 200, "too few usable compositions");
        let (n, p, a): (usize, &[usize], &[usize]) = match done % 3 {
            0 => (4, &[1], &[2, 3]),
            1 => (5, &[1, 2], &[3, 4]),
            _ => (5, &[2], &[1, 4, 5]),
        };
        let part = RolePartition::new(n, p, a).unwrap();
        let slots = part.l() + 1 + part.s().len();
        let f = rename(&random_polynomial_web(&mut rng, slots), Var::U);
        let inner: Vec<usize> = part.a().iter().chain(part.s()).copied().collect();
        let g = rename(&random_polynomial_web(&mut rng, inner.len()), |i| {
            Var::X(inner[i - 1])
        });
        let w = compose(&f, &g, &part).unwrap();
        let report = check_pde(&w, &part, &plan).unwrap();
        if report.failure.is_some() {
            continue;
        }
        assert_eq!(report.verdict, Verdict::Reducible, "f={f} g={g}: {report}");
        assert_eq!(
            check_subweb(&w, &part, &plan).unwrap().verdict,
            Verdict::Reducible
        );
        done += 1;
    }
}

#[test]
fn outer_reparametrisation_preserves_verdicts() {
    let plan = SamplePlan::default();
    let outers = [parse("u1^3 + u1").unwrap(), parse("exp(u1)").unwrap()];
    for entry in corpus() {
        let n = entry.web.n();
        for h in &outers {
            let hf = h.substitute(&|v| match v {
                Var::U(1) => Some(entry.web.function().clone()),
                _ => None,
            });
            let wh = WebSpec::new(n, hf).unwrap();
            for part in RolePartition::enumerate(n, 1) {
                let before = check_pde(&entry.web, &part, &plan).unwrap().verdict;
                let after = check_pde(&wh, &part, &plan).unwrap();
                assert_eq!(after.verdict, before, "{} under {h}, {part}", entry.name);
                let torsion = check_subweb(&wh, &part, &plan).unwrap().verdict;
                assert_eq!(torsion, before, "{} under {h}, {part}", entry.name);
            }
        }
    }
}

#[test]
fn verdicts_ignore_order_within_blocks() {
    let plan = SamplePlan::default();
    let w = web("x1*((x2+x3)*x4)+x4", 4);
    let sorted = RolePartition::new(4, &[1], &[2, 3]).unwrap();
    let shuffled = RolePartition::new(4, &[1], &[3, 2]).unwrap();
    assert_eq!(sorted, shuffled);
    assert_eq!(
        check_pde(&w, &sorted, &plan).unwrap(),
        check_pde(&w, &shuffled, &plan).unwrap()
    );

    // swapping x3 and x4 in F moves the block A = {2,3} to {2,4}
    for entry in corpus().into_iter().filter(|e| e.web.n() == 4) {
        let swapped = rename(entry.web.function(), |i| Var::X([1, 2, 4, 3][i - 1]));
        let ws = WebSpec::new(4, swapped).unwrap();
        let original = RolePartition::new(4, &[1], &[2, 3]).unwrap();
        let moved = RolePartition::new(4, &[1], &[2, 4]).unwrap();
        assert_eq!(
            check_pde(&entry.web, &original, &plan).unwrap().verdict,
            check_pde(&ws, &moved, &plan).unwrap().verdict,
            "{}",
            entry.name
        );
    }
}

#[test]
fn whole_web_condition_refines_the_subweb_condition() {
    let plan = SamplePlan::default();
    for entry in corpus() {
        let n = entry.web.n();
        for part in RolePartition::enumerate(n, n) {
            let full = check_full(&entry.web, &part, &plan).unwrap().verdict;
            let sub = check_subweb(&entry.web, &part, &plan).unwrap().verdict;
            if full == Verdict::Reducible {
                assert_eq!(sub, Verdict::Reducible, "{} {part}", entry.name);
            }
            let large = check_integrability(&entry.web, &part, &plan, true)
                .unwrap()
                .verdict;
            assert_eq!(integrable(large), full, "{} {part}", entry.name);
        }
        if let Kind::Composed {
            partition,
            whole_web: true,
        } = &entry.kind
        {
            assert_eq!(
                check_full(&entry.web, partition, &plan).unwrap().verdict,
                Verdict::Reducible,
                "{}",
                entry.name
            );
        }
    }
}

#[test]
fn subweb_reducible_but_not_whole_web() {
    let plan = SamplePlan::default();
    let part = RolePartition::new(4, &[1], &[2, 3]).unwrap();
    let skew = corpus()
        .into_iter()
        .find(|e| e.name == "skew4")
        .unwrap()
        .web;
    for w in [skew, web("x1 + x2*x3 + x3*x4 + x4", 4)] {
        assert_eq!(
            check_subweb(&w, &part, &plan).unwrap().verdict,
            Verdict::Reducible
        );
        let full = check_full(&w, &part, &plan).unwrap();
        assert_eq!(full.verdict, Verdict::NotReducible, "{}", w.function());
        // the failing equality is a_{42} = a_{43}, confirmed independently
        let witness = full.worst_witness.unwrap();
        assert_eq!((witness.p, witness.a, witness.b), (4, 2, 3));
        let oracle = torsion_by_linear_system(w.function(), &witness.point).unwrap();
        let gap = (oracle.a[3][1] - oracle.a[3][2]).abs();
        assert!(gap > 1e-3, "oracle gap {gap}");
        assert!((gap - full.max_residual.unwrap()).abs() <= 1e-6 * (1.0 + gap));
    }
}

#[test]
fn theta_on_brackets_is_minus_the_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let part = RolePartition::new(4, &[1], &[2, 3]).unwrap();
    let mut cases = 0;
    while cases < 100 {
        let w = WebSpec::new(4, random_polynomial_web(&mut rng, 4)).unwrap();
        let frame = build_frame(&w, &part);
        let pt: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        if !w.is_regular(&pt).unwrap_or(false) {
            continue;
        }
        let d1 = &frame.fields[0];
        let y = &frame.fields[1];
        assert_eq!((d1.name.as_str(), y.name.as_str()), ("d1", "Y2,3"));
        let bracket = lie_bracket(d1, y, &pt).unwrap();
        let theta = frame.theta().eval(&pt).unwrap();
        let (value, scale) = annihilation(&theta, &bracket);
        let r = residual_pde(&w, 1, 2, 3, &pt).unwrap();
        assert!(
            (value + r.value).abs() <= 1e-12 * scale.max(r.scale),
            "{}: {value} vs {}",
            w.function(),
            r.value
        );
        cases += 1;
    }
}

#[test]
fn scan_examples() {
    let plan = SamplePlan::default();
    let reducible = |w: &WebSpec| {
        scan(w, &plan, 4)
            .unwrap()
            .into_iter()
            .filter(|(_, r)| r.verdict == Verdict::Reducible)
            .map(|(p, _)| p)
            .collect::<Vec<_>>()
    };
    let expsum = web("exp(x1)+exp(x2)+exp(x3)+exp(x4)+x1*x2*x3*x4", 4);
    assert!(reducible(&expsum).is_empty());

    let linear = web("x1+x2+x3+x4", 4);
    assert_eq!(
        reducible(&linear).len(),
        RolePartition::enumerate(4, 4).len()
    );

    let product = web("x1*((x2+x3)*x4)", 4);
    let found = reducible(&product);
    assert!(found.contains(&RolePartition::new(4, &[1], &[2, 3]).unwrap()));
    // x1 and x4 enter symmetrically, so the mirrored partition also holds
    assert!(found.contains(&RolePartition::new(4, &[4], &[2, 3]).unwrap()));
}
