//! Seeded synthetic instances.
//!
//! Every draw comes from ChaCha8 keyed by the configured seed. Strategies,
//! models and requests read separate streams of that key, so changing one
//! count leaves the other two unchanged.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

use crate::error::{Error, Result};
use crate::model::{DeploymentRequest, Strategy};
use crate::workforce::{LinearModel, ModelSet, ParamModels};

const STREAM_STRATEGIES: u64 = 1;
const STREAM_MODELS: u64 = 2;
const STREAM_REQUESTS: u64 = 3;
const STREAM_TRIALS: u64 = 4;

pub const NORMAL_MEAN: f64 = 0.75;
pub const NORMAL_SD: f64 = 0.1;
pub const UNIFORM_RANGE: (f64, f64) = (0.5, 1.0);
pub const ALPHA_RANGE: (f64, f64) = (0.5, 1.0);
pub const THRESHOLD_RANGE: (f64, f64) = (0.625, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StrategyDist {
    Uniform,
    #[default]
    Normal,
}

impl StrategyDist {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Some(StrategyDist::Uniform),
            "normal" => Some(StrategyDist::Normal),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyDist::Uniform => "uniform",
            StrategyDist::Normal => "normal",
        }
    }
}

/// Sign of the generated latency slopes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LatencySlope {
    /// `latency = -alpha * w + 1`: more workers, faster results.
    #[default]
    Physical,
    /// `latency = alpha * w + (1 - alpha)`, like the other two parameters.
    Positive,
}

impl LatencySlope {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "physical" => Some(LatencySlope::Physical),
            "positive" => Some(LatencySlope::Positive),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LatencySlope::Physical => "physical",
            LatencySlope::Positive => "positive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub strategy_count: usize,
    pub batch_size: usize,
    pub k: usize,
    pub availability: f64,
    pub strategy_dist: StrategyDist,
    pub latency_slope: LatencySlope,
    pub trials: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            strategy_count: 10_000,
            batch_size: 10,
            k: 10,
            availability: 0.5,
            strategy_dist: StrategyDist::Normal,
            latency_slope: LatencySlope::Physical,
            trials: 10,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("strategy_count", self.strategy_count),
            ("batch_size", self.batch_size),
            ("k", self.k),
            ("trials", self.trials),
        ] {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        if !(0.0..=1.0).contains(&self.availability) {
            return Err(Error::Config(format!(
                "availability must lie in [0, 1], got {}",
                self.availability
            )));
        }
        Ok(())
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Catalog of `strategy_count` strategies with ids `1..=n`.
pub fn gen_strategies(config: &GenConfig) -> Result<Vec<Strategy>> {
    config.validate()?;
    let mut rng = stream(config.seed, STREAM_STRATEGIES);
    let normal = Normal::new(NORMAL_MEAN, NORMAL_SD).expect("constant parameters");
    let uniform = Uniform::new_inclusive(UNIFORM_RANGE.0, UNIFORM_RANGE.1).expect("constant range");
    let draw = |rng: &mut ChaCha8Rng| match config.strategy_dist {
        StrategyDist::Normal => normal.sample(rng).clamp(0.0, 1.0),
        StrategyDist::Uniform => uniform.sample(rng),
    };
    (1..=config.strategy_count)
        .map(|i| {
            let (q, c, l) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
            Strategy::new(i as u32, q, c, l)
        })
        .collect()
}

/// One set of models per strategy: slope uniform in `[0.5, 1]`, intercept
/// `1 - slope`, drawn in quality, cost, latency order.
pub fn gen_models(catalog: &[Strategy], config: &GenConfig) -> ModelSet {
    let mut rng = stream(config.seed, STREAM_MODELS);
    let alpha = Uniform::new_inclusive(ALPHA_RANGE.0, ALPHA_RANGE.1).expect("constant range");
    let mut set = ModelSet::new();
    for s in catalog {
        let (aq, ac, al) = (
            alpha.sample(&mut rng),
            alpha.sample(&mut rng),
            alpha.sample(&mut rng),
        );
        let latency = match config.latency_slope {
            LatencySlope::Physical => LinearModel::new(-al, 1.0),
            LatencySlope::Positive => LinearModel::new(al, 1.0 - al),
        };
        set.insert(
            s.id(),
            ParamModels::new(
                LinearModel::new(aq, 1.0 - aq),
                LinearModel::new(ac, 1.0 - ac),
                latency,
            ),
        );
    }
    set
}

/// `batch_size` requests with ids `1..=m`, thresholds uniform in
/// `[0.625, 1]`, cardinality `k` and pay-off equal to cost.
pub fn gen_requests(config: &GenConfig) -> Result<Vec<DeploymentRequest>> {
    config.validate()?;
    let mut rng = stream(config.seed, STREAM_REQUESTS);
    let threshold =
        Uniform::new_inclusive(THRESHOLD_RANGE.0, THRESHOLD_RANGE.1).expect("constant range");
    (1..=config.batch_size)
        .map(|i| {
            let (q, c, l) = (
                threshold.sample(&mut rng),
                threshold.sample(&mut rng),
                threshold.sample(&mut rng),
            );
            DeploymentRequest::new(i as u32, q, c, l, config.k)
        })
        .collect()
}

/// A full instance: catalog, models and batch.
#[derive(Debug, Clone)]
pub struct Instance {
    pub catalog: Vec<Strategy>,
    pub models: ModelSet,
    pub batch: Vec<DeploymentRequest>,
}

pub fn gen_instance(config: &GenConfig) -> Result<Instance> {
    let catalog = gen_strategies(config)?;
    let models = gen_models(&catalog, config);
    let batch = gen_requests(config)?;
    Ok(Instance {
        catalog,
        models,
        batch,
    })
}

/// Seed for one trial of one sweep point, independent of every other pair.
pub fn trial_seed(base: u64, sweep_index: usize, trial_index: usize) -> u64 {
    let mut rng = stream(base, STREAM_TRIALS);
    rng.set_word_pos(((sweep_index as u128) << 40 | trial_index as u128) * 2);
    rng.next_u64()
}
