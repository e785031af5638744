//! Workforce requirements.
//!
//! Each strategy parameter is modelled as a linear function of worker
//! availability, `value = alpha * w + beta`. Solving those models at a
//! request's thresholds gives the minimal availability `w_ij` at which
//! strategy `j` serves request `i`. The `m x |S|` grid of those values is a
//! [`RequirementMatrix`]; collapsing each row over its `k` cheapest strategies
//! gives a [`RequirementVector`].

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Axis, DeploymentRequest, RequestId, Strategy, StrategyId};

/// A fraction of the available workforce, or the explicit `INFEASIBLE` value.
///
/// Infeasible sorts after every finite value, so it behaves as `+inf` in
/// comparisons and aggregations.
#[derive(Clone, Copy, PartialEq)]
pub struct Workforce(f64);

impl Workforce {
    pub const INFEASIBLE: Workforce = Workforce(f64::INFINITY);
    pub const ZERO: Workforce = Workforce(0.0);

    /// Clamps negative solves to zero; anything above full availability
    /// (or NaN) is infeasible.
    pub fn new(w: f64) -> Self {
        if w.is_nan() || w > 1.0 {
            Workforce::INFEASIBLE
        } else if w <= 0.0 {
            // Also folds -0.0, which total_cmp would order below 0.0.
            Workforce::ZERO
        } else {
            Workforce(w)
        }
    }

    pub fn is_feasible(self) -> bool {
        self.0.is_finite()
    }

    pub fn value(self) -> Option<f64> {
        self.is_feasible().then_some(self.0)
    }

    /// The raw value with `INFEASIBLE` as `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        self.0
    }
}

impl Eq for Workforce {}

impl PartialOrd for Workforce {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Workforce {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl fmt::Debug for Workforce {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "Workforce({v})"),
            None => f.write_str("INFEASIBLE"),
        }
    }
}

impl fmt::Display for Workforce {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("INFEASIBLE"),
        }
    }
}

/// `value = alpha * w + beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearModel {
    pub alpha: f64,
    pub beta: f64,
}

impl LinearModel {
    pub fn new(alpha: f64, beta: f64) -> Self {
        LinearModel { alpha, beta }
    }

    /// A parameter that does not depend on availability.
    pub fn constant(value: f64) -> Self {
        LinearModel {
            alpha: 0.0,
            beta: value,
        }
    }

    pub fn eval(&self, w: f64) -> f64 {
        self.alpha * w + self.beta
    }

    /// Availability at which the model hits `target`; `None` for a flat model.
    pub fn solve(&self, target: f64) -> Option<f64> {
        (self.alpha != 0.0).then(|| (target - self.beta) / self.alpha)
    }
}

/// The three models of one strategy (optionally specialised to one request).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamModels {
    pub quality: LinearModel,
    pub cost: LinearModel,
    pub latency: LinearModel,
}

impl ParamModels {
    pub fn new(quality: LinearModel, cost: LinearModel, latency: LinearModel) -> Self {
        ParamModels {
            quality,
            cost,
            latency,
        }
    }

    /// Flat models reproducing a strategy's catalog point at every availability.
    pub fn constant(s: &Strategy) -> Self {
        ParamModels {
            quality: LinearModel::constant(s.quality()),
            cost: LinearModel::constant(s.cost()),
            latency: LinearModel::constant(s.latency()),
        }
    }

    pub fn get(&self, axis: Axis) -> &LinearModel {
        match axis {
            Axis::Quality => &self.quality,
            Axis::Cost => &self.cost,
            Axis::Latency => &self.latency,
        }
    }

    /// Quality does not fall and latency does not rise as workers are added.
    pub fn is_physical(&self) -> bool {
        self.quality.alpha >= 0.0 && self.latency.alpha <= 0.0
    }
}

/// How the three per-parameter solves combine into one requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RequirementSemantics {
    /// Maximum of the three equality solves, cost included.
    #[default]
    MaxOfThree,
    /// Smallest availability at which quality, cost and latency thresholds all
    /// hold at once; cost with a positive slope becomes an upper bound on `w`.
    FeasibilityStrict,
}

/// Per-strategy models, with optional per-request overrides.
#[derive(Debug, Clone, Default)]
pub struct ModelSet {
    by_strategy: HashMap<StrategyId, ParamModels>,
    overrides: HashMap<(RequestId, StrategyId), ParamModels>,
}

impl ModelSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Flat models for every strategy of a catalog.
    pub fn constant(catalog: &[Strategy]) -> Self {
        let mut set = ModelSet::new();
        for s in catalog {
            set.insert(s.id(), ParamModels::constant(s));
        }
        set
    }

    pub fn insert(&mut self, strategy: StrategyId, models: ParamModels) {
        self.by_strategy.insert(strategy, models);
    }

    pub fn insert_override(
        &mut self,
        request: RequestId,
        strategy: StrategyId,
        models: ParamModels,
    ) {
        self.overrides.insert((request, strategy), models);
    }

    pub fn get(&self, request: RequestId, strategy: StrategyId) -> Option<&ParamModels> {
        self.overrides
            .get(&(request, strategy))
            .or_else(|| self.by_strategy.get(&strategy))
    }

    pub fn strategy_models(&self) -> impl Iterator<Item = (StrategyId, &ParamModels)> {
        self.by_strategy.iter().map(|(id, m)| (*id, m))
    }

    pub fn overrides(&self) -> impl Iterator<Item = (RequestId, StrategyId, &ParamModels)> {
        self.overrides.iter().map(|((r, s), m)| (*r, *s, m))
    }

    pub fn len(&self) -> usize {
        self.by_strategy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_strategy.is_empty()
    }
}

fn threshold_met(axis: Axis, value: f64, threshold: f64) -> bool {
    match axis {
        Axis::Quality => value >= threshold,
        Axis::Cost | Axis::Latency => value <= threshold,
    }
}

/// Minimal availability at which `models` meets the thresholds of `d`.
pub fn required_workforce(
    models: &ParamModels,
    d: &DeploymentRequest,
    semantics: RequirementSemantics,
) -> Workforce {
    match semantics {
        RequirementSemantics::MaxOfThree => max_of_three(models, d),
        RequirementSemantics::FeasibilityStrict => feasibility_strict(models, d),
    }
}

fn max_of_three(models: &ParamModels, d: &DeploymentRequest) -> Workforce {
    let mut worst = 0.0f64;
    for axis in Axis::ALL {
        let model = models.get(axis);
        let threshold = d.threshold(axis);
        let w = match model.solve(threshold) {
            Some(w) => w,
            None if threshold_met(axis, model.beta, threshold) => 0.0,
            None => return Workforce::INFEASIBLE,
        };
        if w.is_nan() {
            return Workforce::INFEASIBLE;
        }
        worst = worst.max(w);
    }
    Workforce::new(worst)
}

fn feasibility_strict(models: &ParamModels, d: &DeploymentRequest) -> Workforce {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for axis in Axis::ALL {
        let model = models.get(axis);
        // Rewrite each threshold as `a * w >= b`.
        let (a, b) = match axis {
            Axis::Quality => (model.alpha, d.quality() - model.beta),
            Axis::Cost | Axis::Latency => (-model.alpha, model.beta - d.threshold(axis)),
        };
        if a > 0.0 {
            lo = lo.max(b / a);
        } else if a < 0.0 {
            hi = hi.min(b / a);
        } else if b > 0.0 {
            return Workforce::INFEASIBLE;
        }
    }
    if lo <= hi {
        Workforce::new(lo)
    } else {
        Workforce::INFEASIBLE
    }
}

/// Requirements of every (request, strategy) pair, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RequirementMatrix {
    requests: Vec<RequestId>,
    strategies: Vec<StrategyId>,
    cells: Vec<Workforce>,
}

impl RequirementMatrix {
    pub fn from_rows(
        requests: Vec<RequestId>,
        strategies: Vec<StrategyId>,
        rows: Vec<Vec<Workforce>>,
    ) -> Result<Self> {
        if rows.len() != requests.len() || rows.iter().any(|r| r.len() != strategies.len()) {
            return Err(Error::validation(
                "requirement matrix",
                "row or column count does not match the identifiers",
            ));
        }
        Ok(RequirementMatrix {
            requests,
            strategies,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n_requests(&self) -> usize {
        self.requests.len()
    }

    pub fn n_strategies(&self) -> usize {
        self.strategies.len()
    }

    pub fn requests(&self) -> &[RequestId] {
        &self.requests
    }

    pub fn strategies(&self) -> &[StrategyId] {
        &self.strategies
    }

    pub fn row(&self, i: usize) -> &[Workforce] {
        let n = self.strategies.len();
        &self.cells[i * n..(i + 1) * n]
    }

    pub fn get(&self, i: usize, j: usize) -> Workforce {
        self.cells[i * self.strategies.len() + j]
    }
}

/// Fills the requirement matrix for `batch` x `catalog`.
///
/// Every (request, strategy) pair needs a model, either a per-strategy entry
/// or a per-request override.
pub fn build_matrix(
    batch: &[DeploymentRequest],
    catalog: &[Strategy],
    models: &ModelSet,
    semantics: RequirementSemantics,
) -> Result<RequirementMatrix> {
    if batch.is_empty() {
        return Err(Error::validation("request batch", "empty"));
    }
    if catalog.is_empty() {
        return Err(Error::validation("strategy catalog", "empty"));
    }

    // Copy per-strategy models into catalog order once; the inner loop then
    // streams through memory instead of chasing hash buckets.
    let base: Vec<Option<ParamModels>> = catalog
        .iter()
        .map(|s| models.by_strategy.get(&s.id()).copied())
        .collect();

    let n = catalog.len();
    let mut cells = Vec::with_capacity(batch.len() * n);
    for d in batch {
        for (j, s) in catalog.iter().enumerate() {
            let m = if models.overrides.is_empty() {
                base[j].as_ref()
            } else {
                models.overrides.get(&(d.id(), s.id())).or(base[j].as_ref())
            };
            let m = m.ok_or_else(|| {
                Error::Config(format!(
                    "no model for request {} and strategy {}",
                    d.id(),
                    s.id()
                ))
            })?;
            cells.push(required_workforce(m, d, semantics));
        }
    }
    Ok(RequirementMatrix {
        requests: batch.iter().map(DeploymentRequest::id).collect(),
        strategies: catalog.iter().map(Strategy::id).collect(),
        cells,
    })
}

/// How a request's `k` strategy requirements collapse into one number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AggregationMode {
    /// All `k` strategies are deployed: sum of the `k` smallest.
    #[default]
    Sum,
    /// One of the `k` is deployed: the `k`-th smallest.
    Max,
}

impl AggregationMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sum" => Some(AggregationMode::Sum),
            "max" => Some(AggregationMode::Max),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AggregationMode::Sum => "sum",
            AggregationMode::Max => "max",
        }
    }
}

/// Positions of the `k` smallest feasible entries of `row`, ordered by
/// (requirement, strategy id). `None` when fewer than `k` entries are feasible.
///
/// Uses a bounded max-heap, so a row of `n` entries costs `O(n log k)`.
pub fn k_smallest(row: &[Workforce], ids: &[StrategyId], k: usize) -> Option<Vec<usize>> {
    debug_assert_eq!(row.len(), ids.len());
    if k == 0 {
        return Some(Vec::new());
    }
    let mut heap: BinaryHeap<(Workforce, StrategyId, usize)> = BinaryHeap::with_capacity(k + 1);
    for (j, (&w, &id)) in row.iter().zip(ids).enumerate() {
        if !w.is_feasible() {
            continue;
        }
        if heap.len() < k {
            heap.push((w, id, j));
        } else if let Some(top) = heap.peek() {
            if (w, id) < (top.0, top.1) {
                heap.pop();
                heap.push((w, id, j));
            }
        }
    }
    if heap.len() < k {
        return None;
    }
    Some(
        heap.into_sorted_vec()
            .into_iter()
            .map(|(_, _, j)| j)
            .collect(),
    )
}

/// Aggregated requirement of one row; infeasible when fewer than `k` strategies
/// are feasible or a sum exceeds full availability.
pub fn aggregate(row: &[Workforce], k: usize, mode: AggregationMode) -> Workforce {
    let ids: Vec<StrategyId> = (0..row.len() as u32).map(StrategyId).collect();
    aggregate_selected(row, k_smallest(row, &ids, k).as_deref(), mode)
}

fn aggregate_selected(
    row: &[Workforce],
    picked: Option<&[usize]>,
    mode: AggregationMode,
) -> Workforce {
    match picked {
        None => Workforce::INFEASIBLE,
        Some([]) => Workforce::ZERO,
        Some(picked) => match mode {
            AggregationMode::Sum => Workforce::new(picked.iter().map(|&j| row[j].as_f64()).sum()),
            AggregationMode::Max => row[*picked.last().unwrap()],
        },
    }
}

/// One request's aggregated requirement and its `k` cheapest strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct RequestRequirement {
    pub request: RequestId,
    pub k: usize,
    pub workforce: Workforce,
    /// The `k` cheapest feasible strategies, cheapest first; empty when fewer
    /// than `k` are feasible.
    pub strategies: Vec<StrategyId>,
}

/// Aggregated requirement per request, aligned with the batch.
#[derive(Debug, Clone, PartialEq)]
pub struct RequirementVector {
    pub mode: AggregationMode,
    pub entries: Vec<RequestRequirement>,
}

impl RequirementVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Builds a vector straight from per-request requirements, without
    /// strategy recommendations. Handy for planner experiments.
    pub fn from_values(mode: AggregationMode, values: &[(RequestId, Workforce)]) -> Self {
        RequirementVector {
            mode,
            entries: values
                .iter()
                .map(|&(request, workforce)| RequestRequirement {
                    request,
                    k: 0,
                    workforce,
                    strategies: Vec::new(),
                })
                .collect(),
        }
    }
}

/// Collapses each matrix row using the `k` of the matching request.
pub fn aggregate_matrix(
    matrix: &RequirementMatrix,
    batch: &[DeploymentRequest],
    mode: AggregationMode,
) -> Result<RequirementVector> {
    if matrix.requests() != batch.iter().map(DeploymentRequest::id).collect::<Vec<_>>() {
        return Err(Error::validation(
            "requirement matrix",
            "rows are not aligned with the request batch",
        ));
    }
    let entries = batch
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let row = matrix.row(i);
            let picked = k_smallest(row, matrix.strategies(), d.k());
            let workforce = aggregate_selected(row, picked.as_deref(), mode);
            RequestRequirement {
                request: d.id(),
                k: d.k(),
                workforce,
                strategies: picked
                    .unwrap_or_default()
                    .into_iter()
                    .map(|j| matrix.strategies()[j])
                    .collect(),
            }
        })
        .collect();
    Ok(RequirementVector { mode, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Strategy;
    use proptest::prelude::{any, prop_assert, prop_oneof, proptest, Just};
    use proptest::strategy::Strategy as _;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn req(q: f64, c: f64, l: f64) -> DeploymentRequest {
        DeploymentRequest::new(1, q, c, l, 1).unwrap()
    }

    fn unit_models() -> ParamModels {
        ParamModels::new(
            LinearModel::new(1.0, 0.0),
            LinearModel::new(1.0, 0.0),
            LinearModel::new(-1.0, 1.0),
        )
    }

    fn w(v: f64) -> Workforce {
        Workforce::new(v)
    }

    const INF: Workforce = Workforce::INFEASIBLE;

    #[test]
    fn max_of_three_linear_solves() {
        let got = required_workforce(
            &unit_models(),
            &req(0.5, 0.7, 0.6),
            RequirementSemantics::MaxOfThree,
        );
        assert!((got.as_f64() - 0.7).abs() < 1e-12, "{got:?}");
    }

    #[test]
    fn strict_mode_treats_cost_as_upper_bound() {
        let got = required_workforce(
            &unit_models(),
            &req(0.5, 0.7, 0.6),
            RequirementSemantics::FeasibilityStrict,
        );
        assert!((got.as_f64() - 0.5).abs() < 1e-12, "{got:?}");
        // Quality needs 0.8 workers but cost caps the workforce at 0.3.
        let got = required_workforce(
            &unit_models(),
            &req(0.8, 0.3, 0.6),
            RequirementSemantics::FeasibilityStrict,
        );
        assert_eq!(got, INF);
    }

    #[test]
    fn translation_quality_model() {
        // Quality of SEQ-IND-CRO on translation: alpha 0.09, beta 0.85.
        let q = LinearModel::new(0.09, 0.85);
        let models = ParamModels::new(q, LinearModel::constant(0.0), LinearModel::constant(0.0));
        let d = req(0.9, 1.0, 1.0);
        let got = required_workforce(&models, &d, RequirementSemantics::MaxOfThree);
        let w = got.value().unwrap();
        assert!((w - 0.05 / 0.09).abs() < 1e-12);
        assert!((q.eval(w) - 0.9).abs() < 1e-12);

        let got = required_workforce(
            &models,
            &req(0.96, 1.0, 1.0),
            RequirementSemantics::MaxOfThree,
        );
        assert_eq!(got, INF);
    }

    #[test]
    fn flat_models_resolve_by_intercept() {
        let s = Strategy::new(1, 0.6, 0.3, 0.2).unwrap();
        let m = ParamModels::constant(&s);
        for sem in [
            RequirementSemantics::MaxOfThree,
            RequirementSemantics::FeasibilityStrict,
        ] {
            assert_eq!(
                required_workforce(&m, &req(0.5, 0.4, 0.3), sem),
                Workforce::ZERO
            );
            assert_eq!(required_workforce(&m, &req(0.7, 0.4, 0.3), sem), INF);
            assert_eq!(required_workforce(&m, &req(0.5, 0.2, 0.3), sem), INF);
        }
    }

    #[test]
    fn build_matrix_shapes_and_clamping() {
        let catalog = vec![Strategy::new(1, 0.5, 0.5, 0.5).unwrap()];
        let mut models = ModelSet::new();
        models.insert(StrategyId(1), unit_models());
        let batch = vec![req(0.5, 0.7, 0.6)];
        let m = build_matrix(&batch, &catalog, &models, RequirementSemantics::MaxOfThree).unwrap();
        assert_eq!((m.n_requests(), m.n_strategies()), (1, 1));
        assert!((m.get(0, 0).as_f64() - 0.7).abs() < 1e-12);

        // All thresholds met with no workers at all.
        let batch = vec![req(0.0, 0.0, 1.0)];
        let m = build_matrix(&batch, &catalog, &models, RequirementSemantics::MaxOfThree).unwrap();
        assert_eq!(m.get(0, 0), Workforce::ZERO);
    }

    #[test]
    fn build_matrix_reports_missing_pairs() {
        let catalog = vec![
            Strategy::new(1, 0.5, 0.5, 0.5).unwrap(),
            Strategy::new(2, 0.5, 0.5, 0.5).unwrap(),
        ];
        let mut models = ModelSet::new();
        models.insert(StrategyId(1), unit_models());
        let err = build_matrix(
            &[req(0.5, 0.5, 0.5)],
            &catalog,
            &models,
            RequirementSemantics::MaxOfThree,
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::Config(ref s) if s.contains("strategy 2")),
            "{err}"
        );

        models.insert_override(RequestId(1), StrategyId(2), unit_models());
        assert!(build_matrix(
            &[req(0.5, 0.5, 0.5)],
            &catalog,
            &models,
            RequirementSemantics::MaxOfThree
        )
        .is_ok());
        assert!(build_matrix(&[], &catalog, &models, RequirementSemantics::MaxOfThree).is_err());
    }

    #[test]
    fn aggregate_examples() {
        let row = [w(0.2), w(0.5), w(0.3), w(0.9)];
        assert!((aggregate(&row, 2, AggregationMode::Sum).as_f64() - 0.5).abs() < 1e-12);
        assert_eq!(aggregate(&row, 2, AggregationMode::Max), w(0.3));

        let row = [w(0.2), INF, w(0.3)];
        assert_eq!(aggregate(&row, 3, AggregationMode::Sum), INF);
        assert_eq!(aggregate(&row, 3, AggregationMode::Max), INF);

        let row = [w(0.6), w(0.6), w(0.6)];
        assert_eq!(aggregate(&row, 2, AggregationMode::Sum), INF);
        assert_eq!(aggregate(&row, 2, AggregationMode::Max), w(0.6));
        assert_eq!(aggregate(&row, 4, AggregationMode::Max), INF);
    }

    #[test]
    fn no_two_of_three_fit_in_one_workforce() {
        // Exhaustive check backing the SUM example above.
        let row = [0.6, 0.6, 0.6];
        for a in 0..3 {
            for b in a + 1..3 {
                assert!(row[a] + row[b] > 1.0);
            }
        }
    }

    #[test]
    fn ties_break_by_strategy_id() {
        let row = [w(0.2), w(0.2), w(0.2)];
        let ids = [StrategyId(3), StrategyId(1), StrategyId(2)];
        let picked = k_smallest(&row, &ids, 2).unwrap();
        assert_eq!(picked, vec![1, 2]);
    }

    #[test]
    fn heap_selection_matches_full_sort() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let n = rng.random_range(1..40);
            let k = rng.random_range(1..10);
            let row: Vec<Workforce> = (0..n)
                .map(|_| {
                    if rng.random_bool(0.2) {
                        INF
                    } else {
                        // Coarse values so ties are common.
                        w(rng.random_range(0..20) as f64 / 20.0)
                    }
                })
                .collect();
            let ids: Vec<StrategyId> = (0..n as u32).rev().map(StrategyId).collect();
            let mut sorted: Vec<usize> = (0..n).filter(|&j| row[j].is_feasible()).collect();
            sorted.sort_by_key(|&j| (row[j], ids[j]));
            let expected = (sorted.len() >= k).then(|| sorted[..k].to_vec());
            assert_eq!(k_smallest(&row, &ids, k), expected);
        }
    }

    fn row_strategy() -> impl proptest::strategy::Strategy<Value = Vec<Workforce>> {
        proptest::collection::vec(
            prop_oneof![4 => (0u32..=50).prop_map(|x| w(x as f64 / 50.0)), 1 => Just(INF)],
            1..25,
        )
    }

    proptest! {
        #[test]
        fn aggregate_is_monotone_in_k(row in row_strategy(), k in 1usize..10) {
            for mode in [AggregationMode::Sum, AggregationMode::Max] {
                prop_assert!(aggregate(&row, k + 1, mode) >= aggregate(&row, k, mode));
            }
        }

        #[test]
        fn sum_is_at_least_max(row in row_strategy(), k in 1usize..10) {
            prop_assert!(aggregate(&row, k, AggregationMode::Sum) >= aggregate(&row, k, AggregationMode::Max));
        }

        #[test]
        fn aggregate_ignores_row_order(row in row_strategy(), k in 1usize..10, seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let mut shuffled = row.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            for mode in [AggregationMode::Sum, AggregationMode::Max] {
                let a = aggregate(&row, k, mode);
                let b = aggregate(&shuffled, k, mode);
                // Summation order may differ in the last ulp.
                prop_assert!(a == b || (a.as_f64() - b.as_f64()).abs() < 1e-12);
            }
        }

        #[test]
        fn finite_requirements_meet_thresholds(
            aq in 0.01..2.0f64, bq in -1.0..1.0f64,
            ac in -2.0..2.0f64, bc in -1.0..1.0f64,
            al in -2.0..-0.01f64, bl in 0.0..2.0f64,
            dq in 0.0..=1.0f64, dc in 0.0..=1.0f64, dl in 0.0..=1.0f64,
        ) {
            let models = ParamModels::new(
                LinearModel::new(aq, bq),
                LinearModel::new(ac, bc),
                LinearModel::new(al, bl),
            );
            prop_assert!(models.is_physical());
            let d = req(dq, dc, dl);
            let tol = 1e-9;
            if let Some(w) = required_workforce(&models, &d, RequirementSemantics::MaxOfThree).value() {
                prop_assert!((0.0..=1.0).contains(&w));
                prop_assert!(models.quality.eval(w) >= dq - tol);
                prop_assert!(models.latency.eval(w) <= dl + tol);
            }
            if let Some(w) = required_workforce(&models, &d, RequirementSemantics::FeasibilityStrict).value() {
                prop_assert!(models.quality.eval(w) >= dq - tol);
                prop_assert!(models.cost.eval(w) <= dc + tol);
                prop_assert!(models.latency.eval(w) <= dl + tol);
            }
        }
    }
}
