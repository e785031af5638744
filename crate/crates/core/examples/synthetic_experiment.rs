//! A small sweep of the satisfied-request percentage over `k`, printed as CSV,
//! followed by a trend check on the per-trial samples.

use stratrec::harness::stats::{trend_test, Direction};
use stratrec::harness::{self, ExperimentKind, ExperimentSpec};

fn main() -> stratrec::Result<()> {
    let mut spec = ExperimentSpec::defaults(ExperimentKind::SatisfiedPct);
    for (key, value) in [
        ("strategies", "200"),
        ("trials", "20"),
        ("values", "2,4,6,8,10"),
        ("seed", "5"),
    ] {
        harness::apply_setting(&mut spec, key, value)?;
    }
    let table = harness::run(&spec)?;
    table.write_csv(std::io::stdout().lock())?;

    let xs: Vec<f64> = table.rows.iter().map(|r| r.value).collect();
    let series = table.series("satisfied_pct").expect("metric exists");
    let report = trend_test(&xs, &series, Direction::NonIncreasing, 0.05);
    println!(
        "\nnon-increasing in k: {} ({} trials agree, {} oppose, p = {:.4})",
        report.passed, report.agreeing, report.opposing, report.p_value
    );
    Ok(())
}
