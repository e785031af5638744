//! Batch deployment planning.
//!
//! Given one aggregated requirement per request and an available workforce
//! `W`, pick the subset of requests to serve:
//!
//! * throughput (count of served requests) is solved exactly by admitting
//!   requests in ascending order of requirement;
//! * pay-off is a 0/1 knapsack, approximated within 1/2 by a ratio greedy that
//!   keeps the better of the greedy prefix and the first request that no
//!   longer fits, then keeps filling.
//!
//! [`brute_force_plan`] enumerates every subset and is the oracle for both.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{DeploymentRequest, RequestId, Strategy, StrategyId};
use crate::workforce::{
    aggregate_matrix, build_matrix, k_smallest, AggregationMode, ModelSet, RequestRequirement,
    RequirementMatrix, RequirementSemantics, RequirementVector, Workforce,
};

/// Slack allowed when comparing spent workforce against `W`.
pub const BUDGET_EPSILON: f64 = 1e-12;

/// Default largest batch the brute-force oracle will enumerate.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    /// Number of satisfied requests.
    #[default]
    Throughput,
    /// Sum of the satisfied requests' pay-offs.
    Payoff,
}

impl Objective {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "throughput" => Some(Objective::Throughput),
            "payoff" | "pay-off" => Some(Objective::Payoff),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::Throughput => "throughput",
            Objective::Payoff => "payoff",
        }
    }

    fn value_of(self, d: &DeploymentRequest) -> f64 {
        match self {
            Objective::Throughput => 1.0,
            Objective::Payoff => d.payoff(),
        }
    }
}

/// Selected requests with their recommended strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchPlan {
    /// Request ids in admission order.
    pub selected: Vec<RequestId>,
    /// Aggregated requirement of each selected request.
    pub requirements: Vec<f64>,
    /// The `k` recommended strategies of each selected request.
    pub recommendations: Vec<Vec<StrategyId>>,
    pub objective: f64,
    pub workforce_used: f64,
}

impl BatchPlan {
    pub fn empty() -> Self {
        BatchPlan {
            selected: Vec::new(),
            requirements: Vec::new(),
            recommendations: Vec::new(),
            objective: 0.0,
            workforce_used: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    /// Selected ids in ascending order.
    pub fn selected_set(&self) -> Vec<RequestId> {
        let mut ids = self.selected.clone();
        ids.sort();
        ids
    }
}

/// A request that can take part in planning: feasible and no larger than `W`.
#[derive(Clone, Copy)]
struct Candidate<'a> {
    index: usize,
    request: &'a DeploymentRequest,
    entry: &'a RequestRequirement,
    workforce: f64,
}

fn check_inputs(
    batch: &[DeploymentRequest],
    vector: &RequirementVector,
    available: f64,
) -> Result<()> {
    if !(available.is_finite() && (0.0..=1.0).contains(&available)) {
        return Err(Error::validation(
            "availability",
            format!("W = {available} is outside [0, 1]"),
        ));
    }
    let aligned = batch.len() == vector.len()
        && batch
            .iter()
            .zip(&vector.entries)
            .all(|(d, e)| d.id() == e.request);
    if !aligned {
        return Err(Error::validation(
            "requirement vector",
            "entries are not aligned with the request batch",
        ));
    }
    Ok(())
}

fn candidates<'a>(
    batch: &'a [DeploymentRequest],
    vector: &'a RequirementVector,
    available: f64,
) -> Vec<Candidate<'a>> {
    batch
        .iter()
        .zip(&vector.entries)
        .enumerate()
        .filter_map(|(index, (request, entry))| {
            let workforce = entry.workforce.value()?;
            (workforce <= available + BUDGET_EPSILON).then_some(Candidate {
                index,
                request,
                entry,
                workforce,
            })
        })
        .collect()
}

fn assemble(chosen: &[Candidate<'_>], objective: Objective) -> BatchPlan {
    BatchPlan {
        selected: chosen.iter().map(|c| c.request.id()).collect(),
        requirements: chosen.iter().map(|c| c.workforce).collect(),
        recommendations: chosen.iter().map(|c| c.entry.strategies.clone()).collect(),
        objective: chosen.iter().map(|c| objective.value_of(c.request)).sum(),
        workforce_used: chosen.iter().map(|c| c.workforce).sum(),
    }
}

/// The `k` strategies of a matrix row with the smallest requirement, ties by
/// ascending id. `None` signals a request that cannot be served.
pub fn recommend_strategies(
    row: &[Workforce],
    ids: &[StrategyId],
    k: usize,
) -> Option<Vec<StrategyId>> {
    k_smallest(row, ids, k).map(|picked| picked.into_iter().map(|j| ids[j]).collect())
}

/// Exact throughput maximisation.
pub fn plan_throughput(
    batch: &[DeploymentRequest],
    vector: &RequirementVector,
    available: f64,
) -> Result<BatchPlan> {
    check_inputs(batch, vector, available)?;
    let mut pool = candidates(batch, vector, available);
    pool.sort_by(|a, b| {
        a.workforce
            .total_cmp(&b.workforce)
            .then(a.request.id().cmp(&b.request.id()))
    });
    let mut used = 0.0;
    let mut chosen = Vec::new();
    for c in pool {
        if used + c.workforce > available + BUDGET_EPSILON {
            // Ascending order: nothing later fits either.
            break;
        }
        used += c.workforce;
        chosen.push(c);
    }
    Ok(assemble(&chosen, Objective::Throughput))
}

/// Non-increasing `payoff / workforce`, ties by ascending request id.
fn by_ratio(a: &Candidate<'_>, b: &Candidate<'_>) -> Ordering {
    let ra = a.request.payoff() / a.workforce;
    let rb = b.request.payoff() / b.workforce;
    rb.total_cmp(&ra).then(a.request.id().cmp(&b.request.id()))
}

/// Pay-off maximisation with the 1/2-approximate ratio greedy.
///
/// Requests needing no workforce are admitted first. The remaining ones are
/// scanned by decreasing ratio; at the first request that overflows `W` the
/// plan keeps whichever of (prefix so far) and (that request alone) pays more,
/// and the scan then continues with whatever still fits.
pub fn plan_payoff(
    batch: &[DeploymentRequest],
    vector: &RequirementVector,
    available: f64,
) -> Result<BatchPlan> {
    check_inputs(batch, vector, available)?;
    let pool = candidates(batch, vector, available);
    let (mut free, mut paid): (Vec<_>, Vec<_>) = pool.into_iter().partition(|c| c.workforce == 0.0);
    free.sort_by_key(|c| c.request.id());
    paid.sort_by(by_ratio);

    let mut chosen: Vec<Candidate<'_>> = Vec::new();
    let mut used = 0.0;
    let mut overflowed = false;
    for c in paid {
        if used + c.workforce <= available + BUDGET_EPSILON {
            used += c.workforce;
            chosen.push(c);
        } else if !overflowed {
            overflowed = true;
            let prefix: f64 = chosen.iter().map(|p| p.request.payoff()).sum();
            if c.request.payoff() > prefix {
                chosen = vec![c];
                used = c.workforce;
            }
        }
    }
    free.extend(chosen);
    Ok(assemble(&free, Objective::Payoff))
}

/// Ratio greedy that stops at the first request that does not fit, with no
/// better-of correction. Used as a comparison point.
pub fn plan_greedy_baseline(
    batch: &[DeploymentRequest],
    vector: &RequirementVector,
    available: f64,
    objective: Objective,
) -> Result<BatchPlan> {
    check_inputs(batch, vector, available)?;
    let mut pool = candidates(batch, vector, available);
    pool.sort_by(|a, b| {
        let value = |c: &Candidate<'_>| objective.value_of(c.request);
        let ra = value(a) / a.workforce;
        let rb = value(b) / b.workforce;
        rb.total_cmp(&ra).then(a.request.id().cmp(&b.request.id()))
    });
    let mut used = 0.0;
    let mut chosen = Vec::new();
    for c in pool {
        if used + c.workforce > available + BUDGET_EPSILON {
            break;
        }
        used += c.workforce;
        chosen.push(c);
    }
    Ok(assemble(&chosen, objective))
}

/// Exhaustive search over all `2^m` subsets.
///
/// Ties on the objective go to the lexicographically smallest sorted id list.
pub fn brute_force_plan(
    batch: &[DeploymentRequest],
    vector: &RequirementVector,
    available: f64,
    objective: Objective,
    cap: usize,
) -> Result<BatchPlan> {
    check_inputs(batch, vector, available)?;
    if batch.len() > cap {
        return Err(Error::SizeCap {
            what: "brute-force batch size",
            needed: batch.len() as u128,
            cap: cap as u128,
        });
    }
    let pool = candidates(batch, vector, available);
    let n = pool.len();
    // Candidates are in batch order; sort a copy by id for the tie-break.
    let mut by_id: Vec<usize> = (0..n).collect();
    by_id.sort_by_key(|&i| pool[i].request.id());

    let mut best_mask = 0u64;
    let mut best_value = 0.0;
    for mask in 1u64..(1u64 << n) {
        let mut used = 0.0;
        let mut value = 0.0;
        for (i, c) in pool.iter().enumerate() {
            if mask >> i & 1 == 1 {
                used += c.workforce;
                value += objective.value_of(c.request);
            }
        }
        if used > available + BUDGET_EPSILON {
            continue;
        }
        let better = match value.total_cmp(&best_value) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                let ids = |m: u64| {
                    by_id
                        .iter()
                        .filter(move |&&i| m >> i & 1 == 1)
                        .map(|&i| pool[i].request.id())
                };
                ids(mask).lt(ids(best_mask))
            }
        };
        if better {
            best_mask = mask;
            best_value = value;
        }
    }
    let mut chosen: Vec<Candidate<'_>> = (0..n)
        .filter(|&i| best_mask >> i & 1 == 1)
        .map(|i| pool[i])
        .collect();
    chosen.sort_by_key(|c| c.index);
    Ok(assemble(&chosen, objective))
}

/// End-to-end batch planning configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct BatchStrat {
    pub semantics: RequirementSemantics,
    pub mode: AggregationMode,
    pub objective: Objective,
}

/// Everything computed for one batch.
#[derive(Debug, Clone)]
pub struct BatchOutcome {
    pub matrix: RequirementMatrix,
    pub vector: RequirementVector,
    pub plan: BatchPlan,
    /// Requests left out of the plan, in batch order.
    pub unsatisfied: Vec<RequestId>,
}

impl BatchStrat {
    pub fn new(
        semantics: RequirementSemantics,
        mode: AggregationMode,
        objective: Objective,
    ) -> Self {
        BatchStrat {
            semantics,
            mode,
            objective,
        }
    }

    /// Builds the requirement matrix and vector, then plans.
    ///
    /// A request asking for more strategies than the catalog holds is rejected
    /// up front with [`Error::Cardinality`].
    pub fn run(
        &self,
        batch: &[DeploymentRequest],
        catalog: &[Strategy],
        models: &ModelSet,
        available: f64,
    ) -> Result<BatchOutcome> {
        if let Some(d) = batch.iter().find(|d| d.k() > catalog.len()) {
            return Err(Error::Cardinality {
                k: d.k(),
                available: catalog.len(),
            });
        }
        let matrix = build_matrix(batch, catalog, models, self.semantics)?;
        let vector = aggregate_matrix(&matrix, batch, self.mode)?;
        let plan = match self.objective {
            Objective::Throughput => plan_throughput(batch, &vector, available)?,
            Objective::Payoff => plan_payoff(batch, &vector, available)?,
        };
        let unsatisfied = batch
            .iter()
            .map(DeploymentRequest::id)
            .filter(|id| !plan.selected.contains(id))
            .collect();
        Ok(BatchOutcome {
            matrix,
            vector,
            plan,
            unsatisfied,
        })
    }
}
