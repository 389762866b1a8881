//! One line per acceptance criterion, then a non-zero exit if any failed.
//! Runs without the libtest harness so the lines are always shown.

#[path = "../../core/tests/common/mod.rs"]
mod graphs;
#[path = "../../sim/tests/common/mod.rs"]
mod estimators;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use mdag::catalog;
use mdag::dsep::d_separated;
use mdag::graph::NodeId;
use mdag::validity::subsample_verdict;
use mdag::VerdictStatus;
use mdag_sim::{
    builtin, fit_ols, generate, pool_rubin, run_method, run_study, AnalysisModel, Column, Dataset, Estimate, Method,
    StudyConfig, StudyResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(problems: Vec<String>, summary: String) -> Self {
        Outcome { pass: problems.is_empty(), summary, details: problems }
    }
}

fn within(elapsed: Duration, limit: Duration, problems: &mut Vec<String>) {
    if elapsed > limit {
        problems.push(format!("took {elapsed:.1?}, limit {limit:?}"));
    }
}

fn catalog_verdicts() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    for s in catalog::all() {
        for m in s.mismatches() {
            problems.push(format!("{}: {m}", s.id));
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1), &mut problems);
    let n = catalog::all().len();
    Outcome::new(problems, format!("{n} scenarios in {elapsed:.2?}"))
}

fn dsep_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let mut problems = Vec::new();
    let mut queries = 0;
    let graphs = 1000;
    for _ in 0..graphs {
        let n = rng.random_range(2..=10);
        let p = rng.random_range(0.1..0.6);
        let g = graphs::random_digraph(&mut rng, n, p);
        for _ in 0..5 {
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            let c = graphs::random_subset(&mut rng, n, 0.3);
            let (a, b) = ([NodeId::new(a)], [NodeId::new(b)]);
            let set = |v: &[NodeId]| v.iter().copied().collect::<BTreeSet<_>>();
            let engine = d_separated(&g, &set(&a), &set(&b), &set(&c)).expect("valid query");
            if engine != graphs::oracle_d_separated(&g, &a, &b, &c) {
                problems.push(format!("edges {:?}, {a:?} vs {b:?} given {c:?}", g.edges().collect::<Vec<_>>()));
            }
            queries += 1;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30), &mut problems);
    let agree = queries - problems.len();
    Outcome::new(problems, format!("{agree}/{queries} queries agree over {graphs} DAGs in {elapsed:.1?}"))
}

#[derive(Clone, Copy, PartialEq)]
enum Expect {
    Unbiased,
    /// Biased with this sign.
    Biased(f64),
    /// Sign only, no magnitude requirement.
    Sign(f64),
}

/// Bias labels of the reference simulation table.
fn reference_table() -> Vec<(&'static str, Vec<(Method, Expect)>)> {
    use Expect::*;
    let sub = |q: &[&str]| Method::subsample(q.iter().copied());
    vec![
        ("fig1a", vec![(Method::Cra, Unbiased), (Method::FullMi, Biased(-1.0)), (sub(&["Y"]), Unbiased), (sub(&["X"]), Unbiased)]),
        ("fig1b", vec![(Method::Cra, Biased(-1.0)), (Method::FullMi, Biased(-1.0)), (sub(&["Y"]), Unbiased), (sub(&["X"]), Biased(-1.0))]),
        (
            "fig4",
            vec![
                (Method::Cra, Unbiased),
                (Method::FullMi, Biased(1.0)),
                (sub(&["X"]), Unbiased),
                (sub(&["W"]), Unbiased),
                (sub(&["W", "X"]), Unbiased),
            ],
        ),
        ("fig5a", vec![(Method::Cra, Biased(-1.0)), (Method::FullMi, Biased(-1.0)), (sub(&["Y"]), Unbiased), (sub(&["W"]), Biased(-1.0))]),
        ("fig5b", vec![(Method::Cra, Biased(1.0)), (Method::FullMi, Biased(1.0)), (sub(&["Y"]), Sign(1.0)), (sub(&["W"]), Biased(1.0))]),
        (
            "fig5c",
            vec![
                (Method::Cra, Biased(-1.0)),
                (Method::FullMi, Biased(-1.0)),
                (sub(&["Y"]), Biased(1.0)),
                (sub(&["W"]), Biased(-1.0)),
                (sub(&["X", "Y"]), Unbiased),
            ],
        ),
    ]
}

fn run_studies() -> (Vec<StudyResult>, Duration) {
    let start = Instant::now();
    let results = reference_table()
        .into_iter()
        .map(|(id, cells)| {
            let mut config = StudyConfig::new(id).expect("simulable");
            config.methods = cells.into_iter().map(|(m, _)| m).collect();
            run_study(&config).expect("study runs")
        })
        .collect();
    (results, start.elapsed())
}

/// Whether a simulated cell shows what `expect` says it should.
fn cell_ok(r: &mdag_sim::MethodResult, expect: Expect) -> bool {
    let z = r.mean_bias.abs() / r.mcse;
    match expect {
        Expect::Unbiased => z <= 3.0,
        Expect::Biased(sign) => r.mean_bias * sign > 0.0 && z > 3.0,
        Expect::Sign(sign) => r.mean_bias * sign > 0.0,
    }
}

fn describe(e: Expect) -> &'static str {
    match e {
        Expect::Unbiased => "unbiased",
        Expect::Biased(s) if s > 0.0 => "biased +",
        Expect::Biased(_) => "biased -",
        Expect::Sign(s) if s > 0.0 => "sign +",
        Expect::Sign(_) => "sign -",
    }
}

fn simulation_pattern(results: &[StudyResult], elapsed: Duration) -> Outcome {
    let mut problems = Vec::new();
    let mut cells = 0;
    for ((id, expected), result) in reference_table().into_iter().zip(results) {
        for (method, expect) in expected {
            let r = result.method(&method).expect("method was run");
            cells += 1;
            if !cell_ok(r, expect) {
                problems.push(format!(
                    "{id} {method}: expected {}, bias {:+.4}, mcse {:.4}, |z| {:.2}",
                    describe(expect),
                    r.mean_bias,
                    r.mcse,
                    r.z()
                ));
            }
        }
    }
    within(elapsed, Duration::from_secs(600), &mut problems);
    let ok = cells - problems.len().min(cells);
    Outcome::new(problems, format!("{ok}/{cells} cells match, 500 reps, n=1000, m=25, in {elapsed:.0?}"))
}

fn verdict_for(g: &mdag::MDag, report: &mdag::StrategyReport, method: &Method) -> VerdictStatus {
    match method {
        Method::Cra => report.cra.status,
        Method::FullMi => report.full_mi.status,
        Method::SubsampleMi(q) => {
            let q: BTreeSet<NodeId> = q.iter().map(|v| g.variable_id(v).expect("variable in graph")).collect();
            subsample_verdict(g, &q).expect("restriction is valid").verdict.status
        }
        Method::FullData => VerdictStatus::Unbiased,
    }
}

fn concordance(results: &[StudyResult]) -> Outcome {
    let mut problems = Vec::new();
    let mut cells = 0;
    for ((id, expected), result) in reference_table().into_iter().zip(results) {
        let g = catalog::get(id).expect("scenario in catalog").graph();
        let report = mdag::analyze(&g);
        for (method, table) in expected {
            cells += 1;
            let verdict = verdict_for(&g, &report, &method);
            let r = result.method(&method).expect("method was run");
            // the verdict predicts the outcome; signs come from the table
            let predicted = match (verdict, table) {
                (VerdictStatus::Unbiased, _) => Expect::Unbiased,
                (VerdictStatus::PossiblyBiased, Expect::Sign(s)) => Expect::Sign(s),
                (VerdictStatus::PossiblyBiased, Expect::Biased(s)) => Expect::Biased(s),
                (VerdictStatus::PossiblyBiased, Expect::Unbiased) => {
                    problems.push(format!("{id} {method}: verdict possibly_biased, table unbiased"));
                    continue;
                }
            };
            if !cell_ok(r, predicted) {
                problems.push(format!(
                    "{id} {method}: verdict {verdict} predicts {}, got bias {:+.4} (|z| {:.2})",
                    describe(predicted),
                    r.mean_bias,
                    r.z()
                ));
            }
        }
    }
    let ok = cells - problems.len().min(cells);
    Outcome::new(problems, format!("{ok}/{cells} verdicts predict the simulated outcome"))
}

fn estimator_suite() -> Outcome {
    let mut problems = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for case in 0..100 {
        let n = 50;
        let k = rng.random_range(1..=4);
        let x: Vec<Vec<f64>> =
            (0..k).map(|_| (0..n).map(|_| 2.0 * rng.sample::<f64, _>(StandardNormal) + 0.5).collect()).collect();
        let y: Vec<f64> = (0..n)
            .map(|i| 1.0 + x.iter().map(|c| 0.3 * c[i]).sum::<f64>() + rng.sample::<f64, _>(StandardNormal))
            .collect();
        let mut columns: Vec<Column> = x
            .iter()
            .enumerate()
            .map(|(j, c)| Column { name: format!("x{j}"), observed: vec![true; n], values: c.clone() })
            .collect();
        columns.push(Column { name: "y".into(), observed: vec![true; n], values: y.clone() });
        let names: Vec<String> = (0..k).map(|j| format!("x{j}")).collect();
        let preds: Vec<&str> = names.iter().map(String::as_str).collect();
        let rows: Vec<usize> = (0..n).collect();
        let e = fit_ols(&Dataset { columns }, "y", &preds, &rows).expect("full rank");
        let (coef, inv_diag) = estimators::oracle_ols(&y, &x);
        let rss: f64 = (0..n)
            .map(|i| (y[i] - coef[0] - (0..k).map(|j| coef[j + 1] * x[j][i]).sum::<f64>()).powi(2))
            .sum();
        let se = (rss / (n - k - 1) as f64 * inv_diag[1]).sqrt();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        if rel(e.beta, coef[1]) > 1e-10 || rel(e.se, se) > 1e-10 {
            problems.push(format!("OLS case {case}: beta {} vs {}, se {} vs {se}", e.beta, coef[1], e.se));
        }
    }

    let est = |beta, se| Estimate { beta, se, n_used: 10 };
    let p = pool_rubin(&[est(0.0, 1.0), est(2.0, 1.0)]).expect("non-empty");
    if p.estimate.beta != 1.0 || (p.estimate.se.powi(2) - 4.0).abs() > 1e-12 {
        problems.push(format!("m=2 pooling: beta {}, variance {}", p.estimate.beta, p.estimate.se.powi(2)));
    }
    let p = pool_rubin(&[est(0.4, 0.3); 7]).expect("non-empty");
    if p.between != 0.0 || (p.estimate.se - 0.3).abs() > 1e-15 {
        problems.push(format!("B=0 pooling: between {}, se {}", p.between, p.estimate.se));
    }

    for id in mdag_sim::SIMULABLE {
        let spec = builtin(id).expect("built-in");
        let model = AnalysisModel::of(&spec);
        let data = generate(&spec, 300, &mut rng).expect("generates").unmasked();
        let full = run_method(&data, &model, &Method::FullData, 1, 1, &mut rng).expect("fits");
        for m in [Method::Cra, Method::FullMi, Method::subsample([spec.outcome.as_str()])] {
            let e = run_method(&data, &model, &m, 5, 3, &mut rng).expect("fits");
            if e.beta != full.beta || e.se != full.se {
                problems.push(format!("{id} {m} without missingness: {} vs full data {}", e.beta, full.beta));
            }
        }
    }
    Outcome::new(problems, "100 OLS problems, Rubin pooling cases, no-missingness identity".into())
}

fn random_text(rng: &mut ChaCha8Rng) -> String {
    const PIECES: &[&str] = &[
        "dag", "\"g\"", "{", "}", "node", "X", "Y", "W", "R[X]", "M[Y]", "->", "<-", ":", ",", ";", "status", "role",
        "complete", "incomplete", "unmeasured", "outcome", "exposure", "covariate", "auxiliary", "target", "~", "+",
        "\n", " ", "#", "\"", "[", "]", "é", "\t", "0", "-",
    ];
    let len = rng.random_range(0..60);
    (0..len).map(|_| PIECES[rng.random_range(0..PIECES.len())]).collect()
}

fn dsl_round_trip() -> Outcome {
    let mut problems = Vec::new();
    for s in catalog::all() {
        let g = s.graph();
        let text = mdag::serialize(&g);
        match mdag::parse(&text) {
            Ok(back) if back == g && mdag::serialize(&back) == text => {}
            Ok(_) => problems.push(format!("{}: round trip changed the graph", s.id)),
            Err(e) => problems.push(format!("{}: serialized form does not parse: {e}", s.id)),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for i in 0..500 {
        let nv = rng.random_range(2..=8);
        let g = graphs::random_mdag(&mut rng, nv, 0.35, 0.3);
        let text = mdag::serialize(&g);
        if mdag::parse(&text).ok().as_ref() != Some(&g) {
            problems.push(format!("random graph {i} did not round trip"));
        }
    }
    let docs: Vec<&str> = catalog::all().iter().map(|s| s.document).collect();
    let mut panics = 0;
    let fuzz = 6000;
    for i in 0..fuzz {
        let text = match i % 2 {
            0 => random_text(&mut rng),
            _ => {
                let mut bytes = docs[rng.random_range(0..docs.len())].as_bytes().to_vec();
                for _ in 0..rng.random_range(1..6) {
                    let at = rng.random_range(0..bytes.len());
                    match rng.random_range(0..3) {
                        0 => bytes.truncate(at),
                        1 => bytes[at] = rng.random(),
                        _ => {
                            bytes.remove(at);
                        }
                    }
                    if bytes.is_empty() {
                        break;
                    }
                }
                String::from_utf8_lossy(&bytes).into_owned()
            }
        };
        if catch_unwind(AssertUnwindSafe(|| mdag::parse(&text))).is_err() {
            panics += 1;
        }
    }
    if panics > 0 {
        problems.push(format!("parser panicked on {panics} of {fuzz} fuzzed inputs"));
    }
    Outcome::new(problems, format!("{} catalog documents, 500 random graphs, {fuzz} fuzzed inputs", docs.len()))
}

fn simulate_cli(threads: &str, format: &str) -> String {
    let out = mdag_cli::invoke([
        "mdag", "simulate", "--scenario", "fig5c", "--reps", "24", "--n", "300", "--m", "5", "--cycles", "5", "--seed", "2024",
        "--format", format, "--threads", threads,
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    out.stdout
}

fn determinism() -> Outcome {
    let mut problems = Vec::new();
    for format in ["csv", "json"] {
        let first = simulate_cli("1", format);
        if simulate_cli("1", format) != first {
            problems.push(format!("{format}: repeated run differs"));
        }
        for threads in ["2", "4"] {
            if simulate_cli(threads, format) != first {
                problems.push(format!("{format}: {threads} threads differ from 1"));
            }
        }
    }
    Outcome::new(problems, "simulate output compared across runs and 1, 2, 4 threads".into())
}

fn main() {
    // quiet the default hook so fuzzed panics, if any, are only counted
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let fuzz = dsl_round_trip();
    std::panic::set_hook(hook);

    let (studies, study_time) = run_studies();
    let outcomes = [
        ("catalog verdicts", catalog_verdicts()),
        ("d-separation oracle", dsep_oracle()),
        ("simulation pattern", simulation_pattern(&studies, study_time)),
        ("verdict-simulation concordance", concordance(&studies)),
        ("estimator suite", estimator_suite()),
        ("DSL round trip", fuzz),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in outcomes.iter().enumerate() {
        println!("criterion {}: {} - {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.summary);
        for d in &o.details {
            println!("    {d}");
        }
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria pass", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
