//! Experiment runner.
//!
//! An [`ExperimentSpec`] names what to measure, which parameter to sweep and
//! the base generator settings. [`run`] produces one [`Table`] row per sweep
//! value with the mean and standard error of every metric over the trials.

mod config;
mod experiment;
pub mod io;
pub mod stats;
pub mod verify;

pub use config::{apply_setting, parse_config};
pub use experiment::{run, Row, Table, TimingRow};

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::synthgen::GenConfig;
use crate::workforce::{AggregationMode, RequirementSemantics};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Percentage of requests the throughput plan serves.
    SatisfiedPct,
    /// Throughput of the planner, the ratio-greedy baseline and the optimum.
    Throughput,
    /// Pay-off of the same three, with approximation factors.
    Payoff,
    /// Alternative-parameter distances: exact, oracle and baselines.
    AdparQuality,
    /// Planner and brute-force running time against batch size.
    ScalingBatch,
    /// Exact relaxation running time.
    ScalingAdpar,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::SatisfiedPct,
        ExperimentKind::Throughput,
        ExperimentKind::Payoff,
        ExperimentKind::AdparQuality,
        ExperimentKind::ScalingBatch,
        ExperimentKind::ScalingAdpar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::SatisfiedPct => "satisfied_pct",
            ExperimentKind::Throughput => "throughput",
            ExperimentKind::Payoff => "payoff",
            ExperimentKind::AdparQuality => "adpar_quality",
            ExperimentKind::ScalingBatch => "scaling_batch",
            ExperimentKind::ScalingAdpar => "scaling_adpar",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn is_timing(self) -> bool {
        matches!(
            self,
            ExperimentKind::ScalingBatch | ExperimentKind::ScalingAdpar
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    K,
    BatchSize,
    Strategies,
    Availability,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::K => "k",
            SweepParam::BatchSize => "m",
            SweepParam::Strategies => "strategies",
            SweepParam::Availability => "availability",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "k" => Some(SweepParam::K),
            "m" | "batch" | "batch_size" => Some(SweepParam::BatchSize),
            "s" | "strategies" | "strategy_count" => Some(SweepParam::Strategies),
            "w" | "availability" => Some(SweepParam::Availability),
            _ => None,
        }
    }

    /// `base` with this parameter set to `value`.
    pub fn apply(self, base: &GenConfig, value: f64) -> Result<GenConfig> {
        let count = || -> Result<usize> {
            if value >= 1.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
                Ok(value as usize)
            } else {
                Err(Error::Config(format!(
                    "{} must be a positive integer, got {value}",
                    self.name()
                )))
            }
        };
        let mut cfg = base.clone();
        match self {
            SweepParam::K => cfg.k = count()?,
            SweepParam::BatchSize => cfg.batch_size = count()?,
            SweepParam::Strategies => cfg.strategy_count = count()?,
            SweepParam::Availability => cfg.availability = value,
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub sweep: SweepParam,
    pub values: Vec<f64>,
    pub base: GenConfig,
    pub mode: AggregationMode,
    pub semantics: RequirementSemantics,
    /// Largest batch the brute-force planner may enumerate.
    pub brute_cap: usize,
    /// Largest number of strategy subsets the relaxation oracle may enumerate.
    pub subset_cap: u128,
    /// Timed repetitions per point; one extra warm-up run is discarded.
    pub timing_reps: usize,
    pub output: Option<PathBuf>,
}

impl ExperimentSpec {
    /// Settings mirroring the published setup of each experiment.
    ///
    /// Batch experiments aggregate with the k-th smallest requirement: with
    /// the generated models every single requirement is at least 0.25, so
    /// summing `k >= 4` of them can never fit a budget of 1.
    pub fn defaults(kind: ExperimentKind) -> Self {
        let gen = |strategy_count, batch_size, k, availability| GenConfig {
            strategy_count,
            batch_size,
            k,
            availability,
            ..GenConfig::default()
        };
        let (sweep, values, base): (SweepParam, Vec<f64>, GenConfig) = match kind {
            ExperimentKind::SatisfiedPct => (
                SweepParam::K,
                vec![2.0, 4.0, 6.0, 8.0, 10.0],
                gen(10_000, 10, 10, 0.5),
            ),
            ExperimentKind::Throughput | ExperimentKind::Payoff => (
                SweepParam::K,
                vec![2.0, 4.0, 6.0, 8.0, 10.0],
                gen(30, 5, 10, 0.5),
            ),
            ExperimentKind::AdparQuality => (
                SweepParam::K,
                vec![1.0, 2.0, 3.0, 4.0, 5.0],
                gen(20, 10, 5, 0.5),
            ),
            ExperimentKind::ScalingBatch => (
                SweepParam::BatchSize,
                vec![2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0],
                gen(30, 10, 10, 0.75),
            ),
            ExperimentKind::ScalingAdpar => (
                SweepParam::Strategies,
                vec![2000.0, 4000.0, 6000.0, 8000.0, 10_000.0],
                gen(10_000, 10, 5, 0.5),
            ),
        };
        ExperimentSpec {
            kind,
            sweep,
            values,
            base,
            mode: AggregationMode::Max,
            semantics: RequirementSemantics::MaxOfThree,
            brute_cap: crate::batchstrat::DEFAULT_BRUTE_FORCE_CAP,
            subset_cap: crate::adpar::DEFAULT_SUBSET_CAP,
            timing_reps: 5,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Config("sweep needs at least one value".into()));
        }
        if self.timing_reps == 0 {
            return Err(Error::Config("timing_reps must be at least 1".into()));
        }
        for &v in &self.values {
            self.sweep.apply(&self.base, v)?;
        }
        Ok(())
    }
}
