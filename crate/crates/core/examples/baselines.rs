//! Exact relaxation against the single-axis and bounding-box baselines on a
//! few random catalogs.

use stratrec::adpar::{
    adpar_brute, adpar_exact, baseline_mbb, baseline_one_dim, DEFAULT_SUBSET_CAP,
};
use stratrec::synthgen::{gen_instance, GenConfig, StrategyDist};

fn main() -> stratrec::Result<()> {
    println!(
        "{:>4} {:>8} {:>8} {:>8} {:>8}",
        "seed", "exact", "brute", "one_dim", "mbb"
    );
    for seed in 0..8 {
        let cfg = GenConfig {
            seed,
            strategy_count: 20,
            batch_size: 1,
            k: 5,
            strategy_dist: if seed % 2 == 0 {
                StrategyDist::Normal
            } else {
                StrategyDist::Uniform
            },
            ..GenConfig::default()
        };
        let inst = gen_instance(&cfg)?;
        let d = &inst.batch[0];
        let exact = adpar_exact(&inst.catalog, d, 5)?;
        let brute = adpar_brute(&inst.catalog, d, 5, DEFAULT_SUBSET_CAP)?;
        let one_dim = baseline_one_dim(&inst.catalog, d, 5)?
            .map(|r| format!("{:.4}", r.distance))
            .unwrap_or_else(|| "-".into());
        let mbb = baseline_mbb(&inst.catalog, d, 5, seed)?;
        println!(
            "{seed:>4} {:>8.4} {:>8.4} {one_dim:>8} {:>8.4}",
            exact.distance, brute.distance, mbb.distance
        );
    }
    Ok(())
}
