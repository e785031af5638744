//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use stratrec::adpar::adpar_exact;
use stratrec::batchstrat::{brute_force_plan, plan_throughput, BatchStrat, Objective};
use stratrec::harness::stats::{linear_fit, median, trend_test, Direction};
use stratrec::harness::{self, verify, ExperimentKind, ExperimentSpec};
use stratrec::model::{example, feasible_strategies, DeploymentRequest, RequestId, StrategyId};
use stratrec::synthgen::{gen_instance, GenConfig};
use stratrec::workforce::{
    aggregate_matrix, build_matrix, AggregationMode, RequirementSemantics, RequirementVector,
    Workforce,
};

const SEED: u64 = 20_240_611;

const THROUGHPUT_BUDGET: Duration = Duration::from_secs(10);
const PAYOFF_BUDGET: Duration = Duration::from_secs(30);
const ADPAR_BUDGET: Duration = Duration::from_secs(60);
const DISTANCE_TOLERANCE: f64 = 1e-9;
const HALF_BOUND: f64 = 0.5;
const MEAN_RATIO_FLOOR: f64 = 0.85;
const TREND_ALPHA: f64 = 0.05;
const TREND_TRIALS: usize = 50;
const MATRIX_BUDGET: Duration = Duration::from_secs(5);
const ADPAR_LARGE_BUDGET: Duration = Duration::from_secs(10);
const LINEAR_R2_FLOOR: f64 = 0.95;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn c1_throughput_exact() -> Outcome {
    let start = Instant::now();
    let check = verify::check_throughput(SEED, 200).expect("suite runs");
    let elapsed = start.elapsed();
    outcome(
        check.passed && elapsed < THROUGHPUT_BUDGET,
        format!(
            "{} in {elapsed:.2?} (budget {THROUGHPUT_BUDGET:?})",
            check.detail
        ),
    )
}

fn c2_payoff_bound() -> Outcome {
    let start = Instant::now();
    let family = verify::payoff_family(SEED, 200).expect("suite runs");
    let worst = family.ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let family_mean = family.ratios.iter().sum::<f64>() / family.ratios.len() as f64;
    // At W = 0.5 almost no default-scale request fits, so the ratio there is
    // mostly 0/0; the larger availabilities give it content.
    let settings: Vec<(f64, f64, usize)> = [0.5, 0.75, 1.0]
        .into_iter()
        .map(|w| {
            let (mean, positive) = verify::payoff_setting_ratio(SEED, 200, w).expect("suite runs");
            (w, mean, positive)
        })
        .collect();
    let elapsed = start.elapsed();
    let settings_ok = settings
        .iter()
        .all(|&(_, mean, _)| mean >= MEAN_RATIO_FLOOR);
    let settings_text: Vec<String> = settings
        .iter()
        .map(|(w, mean, positive)| format!("W={w} mean {mean:.4} ({positive}/200 positive optima)"))
        .collect();
    outcome(
        family.violations == 0
            && worst >= HALF_BOUND
            && family_mean >= MEAN_RATIO_FLOOR
            && settings_ok
            && elapsed < PAYOFF_BUDGET,
        format!(
            "{} below half over 400 instances, worst {worst:.4}; mean ratio {family_mean:.4} over {} positive optima; \
             default scale {}; {elapsed:.2?}",
            family.violations,
            family.ratios.len(),
            settings_text.join(", ")
        ),
    )
}

fn c3_c5_adpar() -> (Outcome, Outcome) {
    let start = Instant::now();
    let cases: Vec<_> = (0..100)
        .map(|i| verify::adpar_instance(SEED, i).expect("instance"))
        .collect();
    let elapsed = start.elapsed();

    let mismatches = cases
        .iter()
        .filter(|c| (c.exact - c.brute).abs() > DISTANCE_TOLERANCE)
        .count();
    let uncovered = cases.iter().filter(|c| !c.covered).count();
    let c3 = outcome(
        mismatches == 0 && uncovered == 0 && elapsed < ADPAR_BUDGET,
        format!(
            "{mismatches} mismatches, {uncovered} uncovered over 100 instances in {elapsed:.2?}"
        ),
    );

    let one_dim_losses = cases
        .iter()
        .filter(|c| c.one_dim.is_some_and(|x| c.exact > x + DISTANCE_TOLERANCE))
        .count();
    let mbb_losses = cases
        .iter()
        .filter(|c| c.exact > c.mbb + DISTANCE_TOLERANCE)
        .count();
    let one_dim_runs = cases.iter().filter(|c| c.one_dim.is_some()).count();
    let mbb_gap = cases.iter().map(|c| c.mbb - c.exact).sum::<f64>() / cases.len() as f64;
    let one_dim_gap = cases
        .iter()
        .filter_map(|c| c.one_dim.map(|x| x - c.exact))
        .sum::<f64>()
        / one_dim_runs.max(1) as f64;
    let c5 = outcome(
        one_dim_losses == 0 && mbb_losses == 0 && mbb_gap > 0.0,
        format!(
            "exact beaten by one_dim {one_dim_losses}x ({one_dim_runs} runs, mean gap {one_dim_gap:.4}), \
             by mbb {mbb_losses}x (mean gap {mbb_gap:.4})"
        ),
    );
    (c3, c5)
}

fn c4_golden() -> Outcome {
    let catalog = example::catalog();
    let requests = example::requests(3);
    let r = adpar_exact(&catalog, &requests[0], 3).expect("runs");
    let a = &r.alternative;
    let alt_ok = (a.quality(), a.cost(), a.latency()) == (0.4, 0.5, 0.28);
    let chosen_ok = r.chosen == [StrategyId(1), StrategyId(2), StrategyId(3)];
    let feasible = feasible_strategies(&catalog, &requests[2]);
    let feasible_ok = feasible == [StrategyId(2), StrategyId(3), StrategyId(4)];
    outcome(
        alt_ok && chosen_ok && feasible_ok,
        format!(
            "d1 -> ({}, {}, {}) with {:?}; d3 feasible {:?}",
            a.quality(),
            a.cost(),
            a.latency(),
            r.chosen.iter().map(|s| s.0).collect::<Vec<_>>(),
            feasible.iter().map(|s| s.0).collect::<Vec<_>>()
        ),
    )
}

fn trend(
    kind: ExperimentKind,
    settings: &[(&str, &str)],
    metric: &str,
    direction: Direction,
) -> (bool, String) {
    let mut spec = ExperimentSpec::defaults(kind);
    for (key, value) in [("strategies", "200"), ("mode", "max"), ("seed", "7")]
        .iter()
        .chain(settings)
    {
        harness::apply_setting(&mut spec, key, value).expect("valid setting");
    }
    harness::apply_setting(&mut spec, "trials", &TREND_TRIALS.to_string()).expect("valid setting");
    let table = harness::run(&spec).expect("experiment runs");
    let xs: Vec<f64> = table.rows.iter().map(|r| r.value).collect();
    let series = table.series(metric).expect("metric present");
    let means: Vec<String> = table
        .rows
        .iter()
        .map(|r| {
            format!(
                "{:.3}",
                r.summary(table.metric_index(metric).unwrap())
                    .map_or(f64::NAN, |(m, _)| m)
            )
        })
        .collect();
    let report = trend_test(&xs, &series, direction, TREND_ALPHA);
    let name = format!("{metric} vs {}", table.sweep.name());
    (
        report.passed,
        format!(
            "{name}: means [{}], {}+/{}- p={:.2e}",
            means.join(" "),
            report.agreeing,
            report.opposing,
            report.p_value
        ),
    )
}

fn c6_trends() -> Outcome {
    use Direction::*;
    let cases = [
        trend(
            ExperimentKind::SatisfiedPct,
            &[("sweep", "k"), ("values", "2,4,6,8,10")],
            "satisfied_pct",
            NonIncreasing,
        ),
        trend(
            ExperimentKind::SatisfiedPct,
            &[("sweep", "availability"), ("values", "0.2,0.4,0.6,0.8,1.0")],
            "satisfied_pct",
            NonDecreasing,
        ),
        trend(
            ExperimentKind::SatisfiedPct,
            &[("sweep", "strategies"), ("values", "20,50,100,200,400")],
            "satisfied_pct",
            NonDecreasing,
        ),
        trend(
            ExperimentKind::AdparQuality,
            &[
                ("sweep", "strategies"),
                ("values", "20,50,100,200,400"),
                ("subset_cap", "0"),
            ],
            "exact",
            NonIncreasing,
        ),
        trend(
            ExperimentKind::AdparQuality,
            &[("sweep", "k"), ("values", "1,2,3,4,5"), ("subset_cap", "0")],
            "exact",
            NonDecreasing,
        ),
    ];
    let passed = cases.iter().all(|(p, _)| *p);
    let detail = cases
        .iter()
        .map(|(p, d)| format!("{}{d}", if *p { "" } else { "[FAILED] " }))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(passed, detail)
}

fn time<T>(f: impl FnOnce() -> T) -> (Duration, T) {
    let start = Instant::now();
    let out = f();
    (start.elapsed(), out)
}

fn c7_scalability() -> Outcome {
    let mut parts = Vec::new();
    let mut passed = true;

    // Million-strategy matrix and plan.
    {
        let cfg = GenConfig {
            seed: SEED,
            strategy_count: 1_000_000,
            batch_size: 100,
            k: 10,
            ..GenConfig::default()
        };
        let inst = gen_instance(&cfg).expect("generates");
        let (elapsed, plan) = time(|| {
            let m = build_matrix(
                &inst.batch,
                &inst.catalog,
                &inst.models,
                RequirementSemantics::MaxOfThree,
            )
            .unwrap();
            let v = aggregate_matrix(&m, &inst.batch, AggregationMode::Max).unwrap();
            plan_throughput(&inst.batch, &v, cfg.availability).unwrap()
        });
        passed &= elapsed <= MATRIX_BUDGET;
        parts.push(format!(
            "10^6 x 100 matrix+plan {elapsed:.2?} ({} served, budget {MATRIX_BUDGET:?})",
            plan.len()
        ));
    }

    // Exact relaxation over ten thousand strategies, one request at a time.
    {
        let cfg = GenConfig {
            seed: SEED,
            strategy_count: 10_000,
            k: 5,
            ..GenConfig::default()
        };
        let inst = gen_instance(&cfg).expect("generates");
        let mut worst = Duration::ZERO;
        for d in &inst.batch {
            let (elapsed, _) = time(|| adpar_exact(&inst.catalog, d, 5).unwrap());
            worst = worst.max(elapsed);
        }
        let tight = DeploymentRequest::new(0, 1.0, 0.0, 0.0, 5).unwrap();
        let (elapsed, _) = time(|| adpar_exact(&inst.catalog, &tight, 5).unwrap());
        worst = worst.max(elapsed);
        passed &= worst <= ADPAR_LARGE_BUDGET;
        parts.push(format!(
            "10^4 relaxation worst {worst:.2?} over 11 requests"
        ));
    }

    // Planner runtime against batch size.
    {
        let catalog_size = 5_000;
        let ms: Vec<usize> = (1..=10).map(|i| i * 10).collect();
        let mut secs = Vec::new();
        for &m in &ms {
            let cfg = GenConfig {
                seed: SEED,
                strategy_count: catalog_size,
                batch_size: m,
                k: 10,
                ..GenConfig::default()
            };
            let inst = gen_instance(&cfg).unwrap();
            let planner = BatchStrat::new(
                RequirementSemantics::MaxOfThree,
                AggregationMode::Max,
                Objective::Throughput,
            );
            let run = || {
                planner
                    .run(&inst.batch, &inst.catalog, &inst.models, 0.5)
                    .unwrap()
            };
            run();
            let reps: Vec<f64> = (0..5).map(|_| time(run).0.as_secs_f64()).collect();
            secs.push(median(&reps));
        }
        let xs: Vec<f64> = ms.iter().map(|&m| m as f64).collect();
        let fit = linear_fit(&xs, &secs);
        passed &= fit.r_squared >= LINEAR_R2_FLOOR;
        parts.push(format!(
            "planner vs m: R^2 {:.4} (floor {LINEAR_R2_FLOOR})",
            fit.r_squared
        ));
    }

    // Exhaustive planner against batch size.
    {
        let ms = [10usize, 12, 14, 16, 18];
        let mut secs = Vec::new();
        for &m in &ms {
            let batch: Vec<_> = (1..=m as u32)
                .map(|i| {
                    DeploymentRequest::with_payoff(i, 0.5, 0.5, 0.5, 1, f64::from(i) / m as f64)
                        .unwrap()
                })
                .collect();
            let values: Vec<(RequestId, Workforce)> = batch
                .iter()
                .map(|d| (d.id(), Workforce::new(0.02 + 0.9 * d.payoff() / m as f64)))
                .collect();
            let v = RequirementVector::from_values(AggregationMode::Sum, &values);
            let run = || brute_force_plan(&batch, &v, 0.5, Objective::Payoff, 20).unwrap();
            let reps: Vec<f64> = (0..3).map(|_| time(run).0.as_secs_f64()).collect();
            secs.push(median(&reps));
        }
        let growth = secs[4] / secs[0];
        let linear_growth = ms[4] as f64 / ms[0] as f64;
        let super_linear = growth > 4.0 * linear_growth;
        passed &= super_linear;
        parts.push(format!(
            "brute force m {}..{}: time x{growth:.0} against x{linear_growth:.1} for linear",
            ms[0], ms[4]
        ));
    }

    outcome(passed, parts.join("; "))
}

fn cli(args: &[&str]) -> std::process::Output {
    let out = Command::new(env!("CARGO_BIN_EXE_stratrec"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn run_commands(dir: &Path) -> Vec<std::path::PathBuf> {
    let d = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let data = d("data");
    cli(&[
        "gen",
        "--seed",
        "5",
        "--strategies",
        "300",
        "--batch",
        "8",
        "--k",
        "3",
        "--output",
        &data,
    ]);
    let (strategies, requests, models) = (
        d("data/strategies.csv"),
        d("data/requests.csv"),
        d("data/models.csv"),
    );
    for (objective, mode) in [("throughput", "max"), ("payoff", "sum")] {
        let plan = d(&format!("plan_{objective}.csv"));
        cli(&[
            "plan",
            "--catalog",
            &strategies,
            "--requests",
            &requests,
            "--models",
            &models,
            "--availability",
            "0.75",
            "--mode",
            mode,
            "--objective",
            objective,
            "--output",
            &plan,
        ]);
    }
    for method in ["exact", "mbb", "brute"] {
        let out = d(&format!("adpar_{method}.csv"));
        cli(&[
            "adpar",
            "--catalog",
            &strategies,
            "--requests",
            &d("data/requests.csv"),
            "--method",
            method,
            "--k",
            "2",
            "--seed",
            "3",
            "--output",
            &out,
        ]);
    }
    cli(&[
        "experiment",
        "--kind",
        "satisfied_pct",
        "--seed",
        "4",
        "--strategies",
        "100",
        "--trials",
        "3",
        "--dist",
        "uniform",
        "--output",
        &d("satisfied.csv"),
    ]);
    cli(&[
        "experiment",
        "--kind",
        "adpar_quality",
        "--seed",
        "4",
        "--trials",
        "2",
        "--output",
        &d("adpar_quality.csv"),
    ]);
    cli(&[
        "experiment",
        "--kind",
        "scaling_batch",
        "--seed",
        "4",
        "--trials",
        "1",
        "--values",
        "2,4",
        "--output",
        &d("scaling.csv"),
    ]);
    cli(&["verify", "--seed", "4", "--output", &d("verify.txt")]);

    let mut files: Vec<_> = walk(dir);
    // Wall-clock timings are the one output that cannot repeat.
    files.retain(|p| !p.to_string_lossy().ends_with(".timing.csv"));
    files.sort();
    files
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out
}

fn c8_determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let fa = run_commands(a.path());
    let fb = run_commands(b.path());
    let rel = |root: &Path, files: &[std::path::PathBuf]| -> Vec<String> {
        files
            .iter()
            .map(|p| p.strip_prefix(root).unwrap().to_string_lossy().into_owned())
            .collect()
    };
    let same_names = rel(a.path(), &fa) == rel(b.path(), &fb);
    let differing: Vec<String> = fa
        .iter()
        .zip(&fb)
        .filter(|(x, y)| std::fs::read(x).unwrap() != std::fs::read(y).unwrap())
        .map(|(x, _)| {
            x.strip_prefix(a.path())
                .unwrap()
                .to_string_lossy()
                .into_owned()
        })
        .collect();
    outcome(
        same_names && differing.is_empty() && fa.len() >= 12,
        format!(
            "{} output files compared, {} differ {:?}",
            fa.len(),
            differing.len(),
            differing
        ),
    )
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut report = |name: &'static str, o: Outcome| {
        println!(
            "{} {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((name, o));
    };
    report("1 throughput exactness", c1_throughput_exact());
    report("2 pay-off bound", c2_payoff_bound());
    let (c3, c5) = c3_c5_adpar();
    report("3 relaxation exactness", c3);
    report("4 worked example", c4_golden());
    report("5 baseline dominance", c5);
    report("6 trends", c6_trends());
    report("7 scalability", c7_scalability());
    report("8 determinism", c8_determinism());

    let failed = results.iter().filter(|(_, o)| !o.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
