//! Plans a synthetic batch under both objectives and compares the result
//! with the plain ratio greedy and exhaustive search.

use stratrec::batchstrat::{brute_force_plan, plan_greedy_baseline, BatchStrat, Objective};
use stratrec::synthgen::{gen_instance, GenConfig, LatencySlope};
use stratrec::workforce::{AggregationMode, RequirementSemantics};

fn main() -> stratrec::Result<()> {
    let cfg = GenConfig {
        seed: 7,
        strategy_count: 500,
        batch_size: 12,
        k: 3,
        latency_slope: LatencySlope::Positive,
        ..GenConfig::default()
    };
    let inst = gen_instance(&cfg)?;
    let available = 0.75;

    for objective in [Objective::Throughput, Objective::Payoff] {
        let planner = BatchStrat::new(
            RequirementSemantics::MaxOfThree,
            AggregationMode::Max,
            objective,
        );
        let out = planner.run(&inst.batch, &inst.catalog, &inst.models, available)?;
        let greedy = plan_greedy_baseline(&inst.batch, &out.vector, available, objective)?;
        let best = brute_force_plan(&inst.batch, &out.vector, available, objective, 20)?;

        println!("{} with W = {available}", objective.name());
        for ((id, w), strategies) in out
            .plan
            .selected
            .iter()
            .zip(&out.plan.requirements)
            .zip(&out.plan.recommendations)
        {
            println!(
                "  serve {id} with {w:.4} of the workforce via [{}]",
                ids(strategies)
            );
        }
        println!("  left out: {}", ids(&out.unsatisfied));
        println!(
            "  objective {:.4} (plain greedy {:.4}, optimum {:.4}), workforce used {:.4}\n",
            out.plan.objective, greedy.objective, best.objective, out.plan.workforce_used
        );
    }
    Ok(())
}

fn ids<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}
