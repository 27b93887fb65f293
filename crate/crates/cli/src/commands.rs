use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use webtorsion::expr::{parse, Expr};
use webtorsion::frobenius::{check_integrability, FrobeniusReport, Integrability};
use webtorsion::presets;
use webtorsion::reducibility::{
    self, compose, parse_index_list, scan_with, Criterion, ReducibilityReport, RolePartition,
    Verdict,
};
use webtorsion::web::{Point, SamplePlan, WebError, WebSpec};

use crate::args::{
    CheckArgs, Cli, Command, ComposeArgs, CriterionArg, OutputArgs, OutputMode, PartitionArgs,
    SampleArgs, ScanArgs, ScanCriterion, TorsionArgs, WebArgs,
};
use crate::CliError;

type Outcome = Result<String, (Option<String>, CliError)>;

fn input(msg: impl ToString) -> (Option<String>, CliError) {
    (None, CliError::Input(msg.to_string()))
}

fn evaluation(msg: impl ToString) -> (Option<String>, CliError) {
    (None, CliError::Evaluation(msg.to_string()))
}

/// Invalid specs are input errors; everything else failed while evaluating.
fn web_error(e: WebError) -> (Option<String>, CliError) {
    match e {
        WebError::Invalid(_) | WebError::Dimension { .. } => input(e),
        _ => evaluation(e),
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Torsion(args) => torsion(args),
        Command::Check(args) => check(args),
        Command::Scan(args) => scan(args),
        Command::Compose(args) => compose_cmd(args),
        Command::Presets(out) => list_presets(out),
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn parse_expr(text: &str, what: &str) -> Result<Expr, (Option<String>, CliError)> {
    parse(text).map_err(|e| input(format!("{what}: {e}")))
}

fn parse_box(text: &str) -> Result<(f64, f64), (Option<String>, CliError)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [lo, hi] => match (lo.parse::<f64>(), hi.parse::<f64>()) {
            (Ok(lo), Ok(hi)) => Ok((lo, hi)),
            _ => Err(input(format!("invalid --box `{text}`"))),
        },
        _ => Err(input(format!("--box expects `lo,hi`, got `{text}`"))),
    }
}

struct ResolvedWeb {
    web: WebSpec,
    preset_partition: Option<RolePartition>,
}

fn resolve_web(args: &WebArgs) -> Result<ResolvedWeb, (Option<String>, CliError)> {
    let (web, preset_partition) = match (&args.expr, &args.preset) {
        (Some(text), None) => {
            let f = parse_expr(text, "--expr")?;
            let n = args.n.unwrap_or_else(|| f.max_x_index());
            (WebSpec::new(n, f).map_err(web_error)?, None)
        }
        (None, Some(name)) => {
            let p = presets::by_name(name).ok_or_else(|| {
                input(format!(
                    "unknown preset `{name}` (known: {})",
                    presets::NAMES.join(", ")
                ))
            })?;
            if let Some(n) = args.n {
                if n != p.web.n() {
                    return Err(input(format!(
                        "preset `{name}` has n = {}, not {n}",
                        p.web.n()
                    )));
                }
            }
            (p.web, Some(p.partition))
        }
        _ => return Err(input("exactly one of --expr or --preset is required")),
    };
    let (lo, hi) = parse_box(&args.bbox)?;
    let web = web
        .with_uniform_box(lo, hi)
        .and_then(|w| w.with_margin(args.margin))
        .map_err(web_error)?;
    Ok(ResolvedWeb {
        web,
        preset_partition,
    })
}

fn resolve_partition(
    args: &PartitionArgs,
    n: usize,
    fallback: Option<RolePartition>,
) -> Result<RolePartition, (Option<String>, CliError)> {
    if let (Some(l), Some(k)) = (args.l, args.k) {
        return RolePartition::contiguous(n, l, k).map_err(input);
    }
    match (&args.p, &args.a) {
        (Some(p), Some(a)) => {
            let p = parse_index_list(p).map_err(input)?;
            let a = parse_index_list(a).map_err(input)?;
            match &args.s {
                Some(s) => {
                    let s = parse_index_list(s).map_err(input)?;
                    RolePartition::with_blocks(n, &p, &a, &s).map_err(input)
                }
                None => RolePartition::new(n, &p, &a).map_err(input),
            }
        }
        (None, None) if args.s.is_none() => {
            fallback.ok_or_else(|| input("a partition is required: --P and --A, or --l and --k"))
        }
        _ => Err(input("--P and --A must be given together")),
    }
}

fn plan(args: &SampleArgs) -> Result<SamplePlan, (Option<String>, CliError)> {
    if args.count == 0 || args.max_rejections == 0 {
        return Err(input("--count and --max-rejections must be positive"));
    }
    Ok(SamplePlan {
        count: args.count,
        seed: args.seed,
        max_rejections: args.max_rejections,
    })
}

#[derive(Serialize)]
struct TorsionOutput<'a> {
    expression: &'a Expr,
    n: usize,
    point: &'a Point,
    a: &'a [Vec<f64>],
    connection: f64,
}

fn torsion(args: TorsionArgs) -> Outcome {
    let resolved = resolve_web(&args.web)?;
    let web = resolved.web;
    let point = Point::parse(&args.at).map_err(|e| input(format!("--at: {e}")))?;
    if point.len() != web.n() {
        return Err(input(format!(
            "--at has {} coordinates, web dimension is {}",
            point.len(),
            web.n()
        )));
    }
    let table = web.torsion(&point).map_err(web_error)?;
    Ok(match args.out.output {
        OutputMode::Json => to_json(&TorsionOutput {
            expression: web.function(),
            n: web.n(),
            point: &table.point,
            a: &table.a,
            connection: table.connection,
        }),
        OutputMode::Table => format!("F = {}\n{table}\n", web.function()),
    })
}

/// A report from any checker, normalised for output and agreement.
struct AnyReport {
    tag: &'static str,
    verdict: Verdict,
    failed: bool,
    json: Value,
    line: String,
}

impl AnyReport {
    fn reducibility(r: ReducibilityReport) -> Self {
        AnyReport {
            tag: r.criterion.tag(),
            verdict: r.verdict,
            failed: r.failure.is_some(),
            json: serde_json::to_value(&r).expect("report serializes"),
            line: r.to_string(),
        }
    }

    fn frobenius(r: FrobeniusReport) -> Self {
        let tag = if r.large { "frobenius-large" } else { "frobenius" };
        let mut json = serde_json::to_value(&r).expect("report serializes");
        json.as_object_mut()
            .expect("report is an object")
            .insert("criterion".into(), Value::from(tag));
        AnyReport {
            tag,
            verdict: match r.verdict {
                Integrability::Integrable => Verdict::Reducible,
                Integrability::NotIntegrable => Verdict::NotReducible,
                Integrability::Inconclusive => Verdict::Inconclusive,
            },
            failed: r.failure.is_some(),
            json,
            line: r.to_string(),
        }
    }
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    expression: &'a Expr,
    n: usize,
    criterion: &'a str,
    verdict: Verdict,
    agree: bool,
    reports: Vec<&'a Value>,
}

fn check(args: CheckArgs) -> Outcome {
    let resolved = resolve_web(&args.web)?;
    let web = resolved.web;
    let part = resolve_partition(&args.partition, web.n(), resolved.preset_partition)?;
    let plan = plan(&args.sample)?;
    let reducibility_report = |c: Criterion| {
        reducibility::check(&web, &part, &plan, c)
            .map(AnyReport::reducibility)
            .map_err(web_error)
    };
    let frobenius_report = |large: bool| {
        check_integrability(&web, &part, &plan, large)
            .map(AnyReport::frobenius)
            .map_err(web_error)
    };
    let (name, reports) = match args.criterion {
        CriterionArg::Eq14 => ("eq14", vec![reducibility_report(Criterion::Torsion)?]),
        CriterionArg::Eq20 => ("eq20", vec![reducibility_report(Criterion::Pde)?]),
        CriterionArg::Eq18 => ("eq18", vec![reducibility_report(Criterion::Full)?]),
        CriterionArg::Frobenius => ("frobenius", vec![frobenius_report(false)?]),
        CriterionArg::FrobeniusLarge => ("frobenius-large", vec![frobenius_report(true)?]),
        CriterionArg::All => (
            "all",
            vec![
                reducibility_report(Criterion::Torsion)?,
                reducibility_report(Criterion::Pde)?,
                frobenius_report(false)?,
            ],
        ),
    };
    let agree = reports.windows(2).all(|w| w[0].verdict == w[1].verdict);
    let verdict = if agree {
        reports[0].verdict
    } else {
        Verdict::Inconclusive
    };

    let out = match args.out.output {
        OutputMode::Json => to_json(&CheckOutput {
            expression: web.function(),
            n: web.n(),
            criterion: name,
            verdict,
            agree,
            reports: reports.iter().map(|r| &r.json).collect(),
        }),
        OutputMode::Table => {
            let mut s = format!("F = {}\n", web.function());
            for r in &reports {
                let _ = writeln!(s, "{}", r.line);
            }
            let note = if reports.len() > 1 {
                if agree {
                    " (all criteria agree)"
                } else {
                    " (criteria DISAGREE)"
                }
            } else {
                ""
            };
            let _ = writeln!(s, "verdict: {verdict}{note}");
            s
        }
    };
    if let Some(r) = reports.iter().find(|r| r.failed) {
        let msg = r.json["failure"]
            .as_str()
            .unwrap_or("sampling failed")
            .to_string();
        return Err((Some(out), CliError::Evaluation(format!("{}: {msg}", r.tag))));
    }
    if !agree {
        let detail: Vec<String> = reports
            .iter()
            .map(|r| format!("{}={}", r.tag, r.verdict))
            .collect();
        return Err((
            Some(out),
            CliError::Disagreement(format!("criteria disagree: {}", detail.join(", "))),
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct ScanOutput<'a> {
    expression: &'a Expr,
    n: usize,
    criterion: &'a str,
    reducible: usize,
    reports: Vec<ReducibilityReport>,
}

fn scan(args: ScanArgs) -> Outcome {
    let web = resolve_web(&args.web)?.web;
    let plan = plan(&args.sample)?;
    let criterion = match args.criterion {
        ScanCriterion::Eq14 => Criterion::Torsion,
        ScanCriterion::Eq20 => Criterion::Pde,
        ScanCriterion::Eq18 => Criterion::Full,
    };
    let l_max = args.l_max.unwrap_or(web.n());
    let results = scan_with(&web, &plan, l_max, criterion).map_err(|e| match e {
        reducibility::ScanError::Web(w) => web_error(w),
        other => input(other),
    })?;
    let reports: Vec<ReducibilityReport> = results.into_iter().map(|(_, r)| r).collect();
    let reducible = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Reducible)
        .count();
    let out = match args.out.output {
        OutputMode::Json => to_json(&ScanOutput {
            expression: web.function(),
            n: web.n(),
            criterion: criterion.tag(),
            reducible,
            reports: reports.clone(),
        }),
        OutputMode::Table => {
            let mut s = format!("F = {}\n", web.function());
            for r in &reports {
                let _ = writeln!(s, "{r}");
            }
            let _ = writeln!(s, "{reducible} of {} partitions reducible", reports.len());
            s
        }
    };
    if let Some(r) = reports.iter().find(|r| r.failure.is_some()) {
        let msg = r.failure.clone().unwrap_or_default();
        return Err((
            Some(out),
            CliError::Evaluation(format!("{}: {msg}", r.partition)),
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct ComposeOutput<'a> {
    expression: &'a Expr,
    n: usize,
    partition: &'a RolePartition,
    self_check: &'a ReducibilityReport,
}

fn compose_cmd(args: ComposeArgs) -> Outcome {
    let f = parse_expr(&args.f, "--f")?;
    let g = parse_expr(&args.g, "--g")?;
    let listed = |s: &Option<String>| -> Result<usize, (Option<String>, CliError)> {
        Ok(match s {
            Some(text) => parse_index_list(text)
                .map_err(input)?
                .into_iter()
                .max()
                .unwrap_or(0),
            None => 0,
        })
    };
    let n = match args.n {
        Some(n) => n,
        None => listed(&args.partition.p)?
            .max(listed(&args.partition.a)?)
            .max(listed(&args.partition.s)?)
            .max(args.partition.k.unwrap_or(0)),
    };
    let part = resolve_partition(&args.partition, n, None)?;
    let web = compose(&f, &g, &part).map_err(input)?;
    let plan = plan(&args.sample)?;
    let report = reducibility::check_pde(&web, &part, &plan).map_err(web_error)?;
    let out = match args.out.output {
        OutputMode::Json => to_json(&ComposeOutput {
            expression: web.function(),
            n,
            partition: &part,
            self_check: &report,
        }),
        OutputMode::Table => format!("{}\nself-check: {report}\n", web.function()),
    };
    if report.failure.is_some() {
        return Err((
            Some(out),
            CliError::Evaluation(report.failure.clone().unwrap_or_default()),
        ));
    }
    Ok(out)
}

#[derive(Serialize)]
struct PresetOutput {
    name: &'static str,
    expression: String,
    f: String,
    g: String,
    partition: RolePartition,
}

fn list_presets(out: OutputArgs) -> Outcome {
    let presets: Vec<PresetOutput> = presets::NAMES
        .iter()
        .filter_map(|name| presets::by_name(name))
        .map(|p| PresetOutput {
            name: p.name,
            expression: p.web.function().to_string(),
            f: p.f.to_string(),
            g: p.g.to_string(),
            partition: p.partition,
        })
        .collect();
    Ok(match out.output {
        OutputMode::Json => to_json(&presets),
        OutputMode::Table => {
            let mut s = String::new();
            for p in &presets {
                let _ = writeln!(
                    s,
                    "{:<9} {}  [f = {}, g = {}, {}]",
                    p.name, p.expression, p.f, p.g, p.partition
                );
            }
            s
        }
    })
}
