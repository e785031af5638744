//! Oracle-equivalence suite: the planners and the exact relaxation checked
//! against exhaustive search on seeded random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adpar::{adpar_brute, adpar_exact, baseline_mbb, baseline_one_dim, DEFAULT_SUBSET_CAP};
use crate::batchstrat::{
    brute_force_plan, plan_payoff, plan_throughput, BatchStrat, Objective, DEFAULT_BRUTE_FORCE_CAP,
};
use crate::error::Result;
use crate::model::{satisfies, DeploymentRequest};
use crate::synthgen::{gen_instance, trial_seed, GenConfig, Instance, StrategyDist};
use crate::workforce::{
    aggregate_matrix, build_matrix, AggregationMode, RequirementSemantics, RequirementVector,
    Workforce,
};

/// Result of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

/// A random batch instance.
#[derive(Debug, Clone)]
pub struct BatchCase {
    pub instance: Instance,
    pub mode: AggregationMode,
    pub semantics: RequirementSemantics,
    pub availability: f64,
}

impl BatchCase {
    pub fn vector(&self) -> Result<RequirementVector> {
        let inst = &self.instance;
        let matrix = build_matrix(&inst.batch, &inst.catalog, &inst.models, self.semantics)?;
        aggregate_matrix(&matrix, &inst.batch, self.mode)
    }
}

/// Draws instance `index` of the family: `m <= 12`, `|S| <= 30`, `W` one of
/// 0.25, 0.5, 0.75, both aggregation modes and both requirement semantics.
/// Sum mode keeps `k <= 3` so that some requests can fit at all.
pub fn batch_instance(seed: u64, index: usize) -> Result<BatchCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, 0, index));
    let mode = if rng.random_bool(0.5) {
        AggregationMode::Sum
    } else {
        AggregationMode::Max
    };
    let semantics = if rng.random_bool(0.5) {
        RequirementSemantics::MaxOfThree
    } else {
        RequirementSemantics::FeasibilityStrict
    };
    let k = match mode {
        AggregationMode::Sum => rng.random_range(1..=3),
        AggregationMode::Max => rng.random_range(1..=10),
    };
    let cfg = GenConfig {
        seed: rng.random(),
        strategy_count: rng.random_range(k.max(5)..=30),
        batch_size: rng.random_range(1..=12),
        k,
        availability: [0.25, 0.5, 0.75][rng.random_range(0..3)],
        strategy_dist: if rng.random_bool(0.5) {
            StrategyDist::Normal
        } else {
            StrategyDist::Uniform
        },
        ..GenConfig::default()
    };
    Ok(BatchCase {
        instance: gen_instance(&cfg)?,
        mode,
        semantics,
        availability: cfg.availability,
    })
}

/// A planner-only instance: requirements drawn directly rather than solved
/// from models, so most requests are serveable. Some requirements are zero,
/// some infeasible, and half the instances round values to a coarse grid to
/// force ties.
pub fn direct_instance(
    seed: u64,
    index: usize,
) -> Result<(Vec<DeploymentRequest>, RequirementVector, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, 3, index));
    let m = rng.random_range(1..=12);
    let coarse = rng.random_bool(0.5);
    let snap = |x: f64| if coarse { (x * 20.0).round() / 20.0 } else { x };
    let mut batch = Vec::with_capacity(m);
    let mut values = Vec::with_capacity(m);
    for i in 0..m {
        let payoff = snap(rng.random_range(0.05..1.0));
        let d = DeploymentRequest::with_payoff(i as u32 + 1, 0.5, 0.5, 0.5, 1, payoff)?;
        let roll: f64 = rng.random();
        let w = if roll < 0.15 {
            Workforce::INFEASIBLE
        } else if roll < 0.25 {
            Workforce::ZERO
        } else {
            Workforce::new(snap(rng.random_range(0.0..0.6)))
        };
        values.push((d.id(), w));
        batch.push(d);
    }
    let w = [0.25, 0.5, 0.75][rng.random_range(0..3)];
    Ok((
        batch,
        RequirementVector::from_values(AggregationMode::Sum, &values),
        w,
    ))
}

/// Every instance of both families: generated ones first, then direct ones.
fn planner_cases(
    seed: u64,
    instances: usize,
) -> impl Iterator<Item = Result<(Vec<DeploymentRequest>, RequirementVector, f64)>> {
    let generated = (0..instances).map(move |i| {
        let case = batch_instance(seed, i)?;
        let v = case.vector()?;
        Ok((case.instance.batch, v, case.availability))
    });
    generated.chain((0..instances).map(move |i| direct_instance(seed, i)))
}

/// Ascending greedy equals the optimum count on every instance.
pub fn check_throughput(seed: u64, instances: usize) -> Result<Check> {
    let mut mismatches = 0;
    let mut served = 0.0;
    for case in planner_cases(seed, instances) {
        let (batch, v, w) = case?;
        let greedy = plan_throughput(&batch, &v, w)?.objective;
        let best = brute_force_plan(
            &batch,
            &v,
            w,
            Objective::Throughput,
            DEFAULT_BRUTE_FORCE_CAP,
        )?
        .objective;
        served += best;
        if greedy != best {
            mismatches += 1;
        }
    }
    Ok(Check {
        name: "throughput_exact",
        passed: mismatches == 0,
        detail: format!(
            "{mismatches} mismatches over {} instances ({served} requests served by the optimum)",
            2 * instances
        ),
    })
}

/// Pay-off greedy against the optimum over both random families.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffSummary {
    /// Instances where the greedy kept less than half of the optimum.
    pub violations: usize,
    /// Greedy / optimum over instances with a positive optimum.
    pub ratios: Vec<f64>,
}

pub fn payoff_family(seed: u64, instances: usize) -> Result<PayoffSummary> {
    let mut summary = PayoffSummary {
        violations: 0,
        ratios: Vec::new(),
    };
    for case in planner_cases(seed, instances) {
        let (batch, v, w) = case?;
        let greedy = plan_payoff(&batch, &v, w)?.objective;
        let best =
            brute_force_plan(&batch, &v, w, Objective::Payoff, DEFAULT_BRUTE_FORCE_CAP)?.objective;
        if best > 0.0 {
            summary.ratios.push(greedy / best);
        }
        if greedy < 0.5 * best - 1e-12 {
            summary.violations += 1;
        }
    }
    Ok(summary)
}

/// The pay-off greedy keeps at least half of the optimum on every instance.
pub fn check_payoff(seed: u64, instances: usize) -> Result<Check> {
    let s = payoff_family(seed, instances)?;
    let worst = s.ratios.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Check {
        name: "payoff_half_bound",
        passed: s.violations == 0,
        detail: format!(
            "{} violations over {} instances, worst ratio {worst}",
            s.violations,
            2 * instances
        ),
    })
}

/// Pay-off ratios at the published default setting (`k = 10`, `m = 5`,
/// `|S| = 30`, `W = 0.5`, k-th smallest aggregation). Returns the mean ratio
/// counting a zero optimum as exact, and the number of instances whose
/// optimum is positive.
pub fn payoff_default_ratio(seed: u64, instances: usize) -> Result<(f64, usize)> {
    payoff_setting_ratio(seed, instances, 0.5)
}

/// [`payoff_default_ratio`] with another availability.
pub fn payoff_setting_ratio(
    seed: u64,
    instances: usize,
    availability: f64,
) -> Result<(f64, usize)> {
    let mut ratios = Vec::new();
    let mut positive = 0;
    for i in 0..instances {
        let cfg = GenConfig {
            seed: trial_seed(seed, 1, i),
            strategy_count: 30,
            batch_size: 5,
            k: 10,
            availability,
            ..GenConfig::default()
        };
        let inst = gen_instance(&cfg)?;
        let out = BatchStrat::new(
            RequirementSemantics::MaxOfThree,
            AggregationMode::Max,
            Objective::Payoff,
        )
        .run(&inst.batch, &inst.catalog, &inst.models, cfg.availability)?;
        let best = brute_force_plan(
            &inst.batch,
            &out.vector,
            cfg.availability,
            Objective::Payoff,
            DEFAULT_BRUTE_FORCE_CAP,
        )?
        .objective;
        if best > 0.0 {
            positive += 1;
            ratios.push(out.plan.objective / best);
        } else {
            ratios.push(1.0);
        }
    }
    Ok((
        ratios.iter().sum::<f64>() / ratios.len().max(1) as f64,
        positive,
    ))
}

/// Relaxation distances from the exact sweep, the oracle and both baselines
/// on one seeded instance with `|S| = 20` and `k = 5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdparComparison {
    pub exact: f64,
    pub brute: f64,
    pub one_dim: Option<f64>,
    pub mbb: f64,
    /// The exact result's strategies satisfy its alternative.
    pub covered: bool,
}

pub fn adpar_instance(seed: u64, index: usize) -> Result<AdparComparison> {
    let cfg = GenConfig {
        seed: trial_seed(seed, 2, index),
        strategy_count: 20,
        batch_size: 1,
        k: 5,
        strategy_dist: if index.is_multiple_of(2) {
            StrategyDist::Normal
        } else {
            StrategyDist::Uniform
        },
        ..GenConfig::default()
    };
    let inst = gen_instance(&cfg)?;
    let (catalog, d) = (&inst.catalog, &inst.batch[0]);
    let exact = adpar_exact(catalog, d, cfg.k)?;
    let covered = catalog
        .iter()
        .filter(|s| exact.chosen.contains(&s.id()))
        .all(|s| satisfies(s, &exact.alternative));
    Ok(AdparComparison {
        exact: exact.distance,
        brute: adpar_brute(catalog, d, cfg.k, DEFAULT_SUBSET_CAP)?.distance,
        one_dim: baseline_one_dim(catalog, d, cfg.k)?.map(|r| r.distance),
        mbb: baseline_mbb(catalog, d, cfg.k, cfg.seed)?.distance,
        covered,
    })
}

pub fn check_adpar(seed: u64, instances: usize) -> Result<Vec<Check>> {
    let mut mismatches = 0;
    let mut uncovered = 0;
    let mut dominated = 0;
    let mut gap = 0.0;
    for i in 0..instances {
        let c = adpar_instance(seed, i)?;
        if (c.exact - c.brute).abs() > 1e-9 {
            mismatches += 1;
        }
        if !c.covered {
            uncovered += 1;
        }
        let one_ok = c.one_dim.is_none_or(|x| c.exact <= x + 1e-12);
        if !one_ok || c.exact > c.mbb + 1e-12 {
            dominated += 1;
        }
        gap += c.mbb - c.exact;
    }
    gap /= instances as f64;
    Ok(vec![
        Check {
            name: "adpar_exact",
            passed: mismatches == 0 && uncovered == 0,
            detail: format!("{mismatches} distance mismatches, {uncovered} uncovered results over {instances} instances"),
        },
        Check {
            name: "adpar_baselines",
            passed: dominated == 0 && gap > 0.0,
            detail: format!("{dominated} instances where a baseline beat the exact result; mean box gap {gap}"),
        },
    ])
}

/// Every check, with the instance counts used by the command line.
pub fn run_suite(seed: u64) -> Result<Vec<Check>> {
    let mut checks = vec![check_throughput(seed, 200)?, check_payoff(seed, 200)?];
    let family = payoff_family(seed, 200)?;
    let mean = family.ratios.iter().sum::<f64>() / family.ratios.len().max(1) as f64;
    let (default_mean, positive) = payoff_default_ratio(seed, 200)?;
    checks.push(Check {
        name: "payoff_mean_ratio",
        passed: mean >= 0.85 && default_mean >= 0.85,
        detail: format!(
            "family mean {mean} over {} instances with a positive optimum; default setting mean {default_mean} ({positive} of 200 with a positive optimum)",
            family.ratios.len()
        ),
    });
    checks.extend(check_adpar(seed, 100)?);
    Ok(checks)
}
