use std::path::PathBuf;
use std::str::FromStr;

use super::{ExperimentKind, ExperimentSpec, SweepParam};
use crate::error::{Error, Result};
use crate::synthgen::{LatencySlope, StrategyDist};
use crate::workforce::{AggregationMode, RequirementSemantics};

/// Splits `key = value` lines. Blank lines and `#` comments are skipped;
/// later keys win.
pub fn parse_config(text: &str, source: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(format!("{source}:{}", n + 1), "expected key = value"))?;
        out.push((key.trim().to_ascii_lowercase(), value.trim().to_string()));
    }
    Ok(out)
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

fn named<T>(key: &str, value: &str, parse: impl Fn(&str) -> Option<T>) -> Result<T> {
    parse(value).ok_or_else(|| Error::Config(format!("{key}: unknown value {value:?}")))
}

/// Sets one spec field from its textual form.
///
/// Keys: `kind`, `sweep`, `values` (comma-separated), `seed`, `strategies`,
/// `batch`, `k`, `availability`, `dist`, `latency`, `trials`, `mode`,
/// `semantics`, `brute_cap`, `subset_cap`, `timing_reps`, `output`.
pub fn apply_setting(spec: &mut ExperimentSpec, key: &str, value: &str) -> Result<()> {
    let b = &mut spec.base;
    match key {
        "kind" => spec.kind = named(key, value, ExperimentKind::parse)?,
        "sweep" => spec.sweep = named(key, value, SweepParam::parse)?,
        "values" => {
            spec.values = value
                .split(',')
                .map(str::trim)
                .filter(|v| !v.is_empty())
                .map(|v| number(key, v))
                .collect::<Result<_>>()?
        }
        "seed" => b.seed = number(key, value)?,
        "strategies" | "strategy_count" => b.strategy_count = number(key, value)?,
        "batch" | "batch_size" | "m" => b.batch_size = number(key, value)?,
        "k" => b.k = number(key, value)?,
        "availability" | "w" => b.availability = number(key, value)?,
        "dist" => b.strategy_dist = named(key, value, StrategyDist::parse)?,
        "latency" => b.latency_slope = named(key, value, LatencySlope::parse)?,
        "trials" => b.trials = number(key, value)?,
        "mode" => spec.mode = named(key, value, AggregationMode::parse)?,
        "semantics" => {
            spec.semantics = named(key, value, |v| match v {
                "max_of_three" | "max-of-three" => Some(RequirementSemantics::MaxOfThree),
                "strict" | "feasibility_strict" => Some(RequirementSemantics::FeasibilityStrict),
                _ => None,
            })?
        }
        "brute_cap" => spec.brute_cap = number(key, value)?,
        "subset_cap" => spec.subset_cap = number(key, value)?,
        "timing_reps" => spec.timing_reps = number(key, value)?,
        "output" => spec.output = Some(PathBuf::from(value)),
        _ => return Err(Error::Config(format!("unknown key {key:?}"))),
    }
    Ok(())
}
