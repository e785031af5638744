//! Alternative deployment parameters.
//!
//! When no plan can serve a request `d` with `k` strategies, recommend the
//! closest request `d'` (squared Euclidean distance over quality, cost and
//! latency) that `k` strategies satisfy. Relaxation only ever loosens a
//! threshold: quality goes down, cost and latency go up.
//!
//! In the normalized "smaller is better" space a request is a box anchored at
//! the origin and a strategy is a point; the best `d'` is always the envelope
//! (componentwise max) of `d` and some `k` strategies, so every coordinate of
//! `d'` is either `d`'s own or a strategy coordinate.
//!
//! * [`adpar_exact`] sweeps the sorted relaxation values ([`SweepState`]).
//! * [`adpar_brute`] enumerates every `k`-subset and is the oracle.
//! * [`baseline_one_dim`] and [`baseline_mbb`] are the comparison baselines.

mod baselines;
mod oracle;
mod sweep;

pub use baselines::{baseline_mbb, baseline_one_dim};
pub use oracle::{adpar_brute, DEFAULT_SUBSET_CAP};
pub use sweep::{adpar_exact, Relaxation, SweepState};

use crate::error::{Error, Result};
use crate::model::{Axis, DeploymentRequest, Strategy, StrategyId};

/// An alternative request and the strategies that satisfy it.
#[derive(Debug, Clone, PartialEq)]
pub struct AdparResult {
    /// Relaxed request; same id, `k` and pay-off as the original.
    pub alternative: DeploymentRequest,
    /// Exactly `k` strategy ids, ascending.
    pub chosen: Vec<StrategyId>,
    /// Euclidean distance between the original and the alternative.
    pub distance: f64,
}

impl AdparResult {
    pub fn distance_squared(&self, original: &DeploymentRequest) -> f64 {
        distance_squared(original, &self.alternative)
    }
}

/// Per-axis non-negative increase `d` needs to cover `s`, in normalized space.
pub(crate) fn relaxation(s: &Strategy, d: &DeploymentRequest) -> [f64; 3] {
    let up = |x: f64| if x > 0.0 { x } else { 0.0 };
    [
        up(d.quality() - s.quality()),
        up(s.cost() - d.cost()),
        up(s.latency() - d.latency()),
    ]
}

pub fn distance_squared(a: &DeploymentRequest, b: &DeploymentRequest) -> f64 {
    Axis::ALL
        .iter()
        .map(|&axis| (a.threshold(axis) - b.threshold(axis)).powi(2))
        .sum()
}

/// The tightest request that keeps `d`'s thresholds where possible and admits
/// every member.
pub(crate) fn envelope<'a>(
    d: &DeploymentRequest,
    k: usize,
    members: impl IntoIterator<Item = &'a Strategy>,
) -> DeploymentRequest {
    let (mut q, mut c, mut l) = (d.quality(), d.cost(), d.latency());
    for s in members {
        q = q.min(s.quality());
        c = c.max(s.cost());
        l = l.max(s.latency());
    }
    DeploymentRequest::with_payoff(d.id().0, q, c, l, k, d.payoff())
        .expect("envelope of valid points is valid")
}

/// Packs chosen catalog positions into a result.
pub(crate) fn finish(
    catalog: &[Strategy],
    d: &DeploymentRequest,
    k: usize,
    picked: &[usize],
) -> AdparResult {
    let alternative = envelope(d, k, picked.iter().map(|&j| &catalog[j]));
    finish_with(catalog, d, alternative, picked)
}

/// Like [`finish`] but with an alternative that may be looser than the
/// envelope of the picked strategies.
pub(crate) fn finish_with(
    catalog: &[Strategy],
    d: &DeploymentRequest,
    alternative: DeploymentRequest,
    picked: &[usize],
) -> AdparResult {
    let mut chosen: Vec<StrategyId> = picked.iter().map(|&j| catalog[j].id()).collect();
    chosen.sort();
    let distance = distance_squared(d, &alternative).sqrt();
    AdparResult {
        alternative,
        chosen,
        distance,
    }
}

pub(crate) fn check_cardinality(catalog: &[Strategy], k: usize) -> Result<()> {
    if k == 0 || k > catalog.len() {
        return Err(Error::Cardinality {
            k,
            available: catalog.len(),
        });
    }
    Ok(())
}
