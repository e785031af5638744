//! Finds the closest relaxed request covering `k` strategies in a large
//! synthetic catalog, then replays the sweep step by step on a small one.

use std::time::Instant;

use stratrec::adpar::{adpar_exact, SweepState};
use stratrec::model::{satisfies, DeploymentRequest};
use stratrec::synthgen::{gen_strategies, GenConfig};

fn main() -> stratrec::Result<()> {
    let catalog = gen_strategies(&GenConfig {
        seed: 3,
        strategy_count: 10_000,
        ..GenConfig::default()
    })?;
    let d = DeploymentRequest::new(1, 0.97, 0.55, 0.55, 5)?;

    let start = Instant::now();
    let r = adpar_exact(&catalog, &d, 5)?;
    let a = &r.alternative;
    println!(
        "request (0.97, 0.55, 0.55) -> ({:.4}, {:.4}, {:.4}), distance {:.4}, {:.1?}",
        a.quality(),
        a.cost(),
        a.latency(),
        r.distance,
        start.elapsed()
    );
    for s in catalog.iter().filter(|s| r.chosen.contains(&s.id())) {
        assert!(satisfies(s, a));
        println!(
            "  {} ({:.3}, {:.3}, {:.3})",
            s.id(),
            s.quality(),
            s.cost(),
            s.latency()
        );
    }

    let small = &catalog[..40];
    let mut state = SweepState::new(small, &d, 3)?;
    println!("\nsweep over 40 strategies, k = 3");
    let mut last = (0, None);
    while state.advance() {
        let now = (state.covered_count(), state.best_distance_squared());
        if now == last {
            continue;
        }
        last = now;
        let t = state.relaxations()[state.cursor() - 1].value;
        let best = state
            .best_distance_squared()
            .map_or_else(|| "-".to_string(), |b| format!("{b:.5}"));
        println!(
            "  t = {t:.4}  covered {:>2}  best distance^2 {best}",
            state.covered_count()
        );
    }
    let r = state.into_result();
    println!(
        "result: distance {:.4}, strategies [{}]",
        r.distance,
        ids(&r.chosen)
    );
    Ok(())
}

fn ids<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}
