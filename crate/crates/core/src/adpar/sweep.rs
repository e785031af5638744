use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use super::{check_cardinality, finish, relaxation, AdparResult};
use crate::error::Result;
use crate::model::{
    normalize_request, Axis, DeploymentRequest, NormalizedPoint, Strategy, StrategyId,
};

/// One entry of the sorted relaxation list: how far `axis` of the request
/// must move to admit `strategy` on that axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Relaxation {
    pub value: f64,
    pub strategy: StrategyId,
    pub axis: Axis,
    /// Position of the strategy in the catalog.
    pub position: usize,
}

/// State of the exact relaxation sweep.
///
/// The sweep value `t` walks the sorted relaxation list. A strategy whose
/// three relaxations are all `<= t` lies inside the cube `[0, t]^3`; every
/// time new strategies enter the cube, 2-D refinements look for the cheapest
/// corner that covers `k` cube members with one axis pinned at `t`
/// (quality-pinned, cost-pinned and latency-pinned projections). The optimum
/// has some largest coordinate `t*`, and the refinement run at `t*` finds it;
/// the sweep stops once `t` plus the per-axis lower bounds can no longer beat
/// the best corner seen.
#[derive(Debug, Clone)]
pub struct SweepState<'a> {
    catalog: &'a [Strategy],
    request: &'a DeploymentRequest,
    k: usize,
    relax: Vec<[f64; 3]>,
    order: Vec<Relaxation>,
    coverage: Vec<[bool; 3]>,
    cursor: usize,
    lower_bounds: [f64; 3],
    candidate: [f64; 3],
    cube: Vec<usize>,
    /// Cube members keyed for each pinned axis by (free-axis-1, free-axis-2,
    /// id). Relaxations are non-negative, so raw bits order like the values.
    by_projection: [BTreeSet<(u64, u64, StrategyId, usize)>; 3],
    best: Option<(f64, Vec<usize>)>,
    done: bool,
}

fn free_axes(pinned: Axis) -> (usize, usize) {
    match pinned {
        Axis::Quality => (1, 2),
        Axis::Cost => (0, 2),
        Axis::Latency => (0, 1),
    }
}

fn squared(v: [f64; 3]) -> f64 {
    v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
}

impl<'a> SweepState<'a> {
    /// Computes relaxations, sorts them, and places the sweep at the smallest
    /// of the three per-axis `k`-th smallest relaxations: no corner covering
    /// `k` strategies can sit below those on any axis.
    pub fn new(catalog: &'a [Strategy], request: &'a DeploymentRequest, k: usize) -> Result<Self> {
        check_cardinality(catalog, k)?;
        let relax: Vec<[f64; 3]> = catalog.iter().map(|s| relaxation(s, request)).collect();

        let mut order: Vec<Relaxation> = Vec::with_capacity(3 * catalog.len());
        for (position, (s, r)) in catalog.iter().zip(&relax).enumerate() {
            for axis in Axis::ALL {
                order.push(Relaxation {
                    value: r[axis.index()],
                    strategy: s.id(),
                    axis,
                    position,
                });
            }
        }
        order.sort_by(|a, b| {
            a.value
                .total_cmp(&b.value)
                .then(a.axis.cmp(&b.axis))
                .then(a.strategy.cmp(&b.strategy))
        });

        let mut lower_bounds = [0.0; 3];
        for axis in Axis::ALL {
            let mut values: Vec<f64> = relax.iter().map(|r| r[axis.index()]).collect();
            let (_, kth, _) = values.select_nth_unstable_by(k - 1, f64::total_cmp);
            lower_bounds[axis.index()] = *kth;
        }
        let start = lower_bounds.iter().copied().fold(f64::INFINITY, f64::min);

        let mut state = SweepState {
            catalog,
            request,
            k,
            coverage: vec![[false; 3]; catalog.len()],
            relax,
            order,
            cursor: 0,
            lower_bounds,
            candidate: lower_bounds,
            cube: Vec::new(),
            by_projection: Default::default(),
            best: None,
            done: false,
        };
        // Everything strictly below the starting value is covered on its axis.
        while state.cursor < state.order.len() && state.order[state.cursor].value < start {
            let entry = state.order[state.cursor];
            state.mark(entry);
            state.cursor += 1;
        }
        Ok(state)
    }

    /// Sorted relaxation list; `value`, `strategy` and `axis` of each entry.
    pub fn relaxations(&self) -> &[Relaxation] {
        &self.order
    }

    /// Per-strategy, per-axis coverage by the current sweep value.
    pub fn coverage(&self) -> &[[bool; 3]] {
        &self.coverage
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    /// The `k`-th smallest relaxation on each axis.
    pub fn lower_bounds(&self) -> [f64; 3] {
        self.lower_bounds
    }

    /// Current alternative request in normalized coordinates.
    pub fn candidate(&self) -> NormalizedPoint {
        let base = normalize_request(self.request);
        NormalizedPoint {
            q: base.q + self.candidate[0],
            c: base.c + self.candidate[1],
            l: base.l + self.candidate[2],
        }
    }

    /// Number of strategies covered on all three axes by the sweep value.
    pub fn covered_count(&self) -> usize {
        self.cube.len()
    }

    /// Squared distance of the best corner found so far.
    pub fn best_distance_squared(&self) -> Option<f64> {
        self.best.as_ref().map(|(score, _)| *score)
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    fn mark(&mut self, entry: Relaxation) {
        let cell = &mut self.coverage[entry.position];
        cell[entry.axis.index()] = true;
        if cell.iter().all(|&c| c) {
            let j = entry.position;
            self.cube.push(j);
            let id = self.catalog[j].id();
            for pinned in Axis::ALL {
                let (u, v) = free_axes(pinned);
                let r = &self.relax[j];
                self.by_projection[pinned.index()].insert((r[u].to_bits(), r[v].to_bits(), id, j));
            }
        }
    }

    /// Moves the cursor past every entry equal to the next relaxation value,
    /// refines if the cube grew, and reports whether the sweep continues.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        let Some(&next) = self.order.get(self.cursor) else {
            self.done = true;
            return false;
        };
        let t = next.value;
        if let Some((best, _)) = &self.best {
            // Any corner found from here has one coordinate >= t and the
            // other two at least at their lower bounds.
            let floor = Axis::ALL
                .iter()
                .map(|&a| self.projection_floor(a, t))
                .fold(f64::INFINITY, f64::min);
            if floor >= *best {
                self.done = true;
                return false;
            }
        }

        let before = self.cube.len();
        while self.cursor < self.order.len() && self.order[self.cursor].value == t {
            let entry = self.order[self.cursor];
            self.mark(entry);
            let slot = &mut self.candidate[entry.axis.index()];
            *slot = slot.max(t);
            self.cursor += 1;
        }

        // A corner pinned at `t` on axis `a` needs a member whose relaxation
        // on `a` is exactly `t`; such a member enters the cube in this group.
        if self.cube.len() >= self.k {
            let mut pinned = [false; 3];
            for &j in &self.cube[before..] {
                for (p, &r) in pinned.iter_mut().zip(&self.relax[j]) {
                    *p |= r == t;
                }
            }
            self.refine(t, pinned);
        }
        if self.cursor >= self.order.len() {
            self.done = true;
        }
        !self.done
    }

    fn projection_floor(&self, pinned: Axis, t: f64) -> f64 {
        let (u, v) = free_axes(pinned);
        t * t + self.lower_bounds[u].powi(2) + self.lower_bounds[v].powi(2)
    }

    /// 2-D projections: pin one axis at `t` and find the smallest corner on
    /// the other two that covers `k` cube members.
    fn refine(&mut self, t: f64, pinned_axes: [bool; 3]) {
        let mut best_bound = self.best.as_ref().map_or(f64::INFINITY, |(s, _)| *s);
        let mut improved: Option<Vec<usize>> = None;
        for pinned in Axis::ALL {
            if !pinned_axes[pinned.index()] || self.projection_floor(pinned, t) >= best_bound {
                continue;
            }
            let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::with_capacity(self.k + 1);
            for &(ub, vb, id, j) in &self.by_projection[pinned.index()] {
                let (ru, rv) = (f64::from_bits(ub), f64::from_bits(vb));
                if t * t + ru * ru >= best_bound {
                    break;
                }
                if heap.len() == self.k
                    && heap
                        .peek()
                        .is_some_and(|top| (rv, id) >= (top.value, top.id))
                {
                    continue;
                }
                heap.push(HeapEntry {
                    value: rv,
                    id,
                    position: j,
                });
                if heap.len() > self.k {
                    heap.pop();
                }
                if heap.len() == self.k {
                    let top = heap.peek().map_or(0.0, |e| e.value);
                    let bound = t * t + ru * ru + top * top;
                    if bound < best_bound {
                        let members: Vec<usize> = heap.iter().map(|e| e.position).collect();
                        // The true corner of these members can only be tighter.
                        best_bound = squared(self.corner(&members)).min(bound);
                        improved = Some(members);
                    }
                }
            }
        }
        if let Some(members) = improved {
            self.candidate = self.corner(&members);
            self.best = Some((squared(self.candidate), members));
        }
    }

    fn corner(&self, members: &[usize]) -> [f64; 3] {
        let mut c = [0.0f64; 3];
        for &j in members {
            for (x, &r) in c.iter_mut().zip(&self.relax[j]) {
                *x = x.max(r);
            }
        }
        c
    }

    /// Runs the sweep to completion.
    pub fn run(mut self) -> AdparResult {
        while self.advance() {}
        self.into_result()
    }

    /// Builds the result from the best corner. When the corner covers more
    /// than `k` strategies, reports the `k` with the smallest own relaxation,
    /// ties by id.
    pub fn into_result(self) -> AdparResult {
        let (_, members) = self
            .best
            .as_ref()
            .expect("a k-subset always exists once the sweep has run");
        let corner = self.corner(members);
        let mut covered: Vec<usize> = (0..self.catalog.len())
            .filter(|&j| (0..3).all(|a| self.relax[j][a] <= corner[a]))
            .collect();
        covered.sort_by(|&a, &b| {
            squared(self.relax[a])
                .total_cmp(&squared(self.relax[b]))
                .then(self.catalog[a].id().cmp(&self.catalog[b].id()))
        });
        covered.truncate(self.k);
        finish(self.catalog, self.request, self.k, &covered)
    }
}

#[derive(Debug, Clone, Copy)]
struct HeapEntry {
    value: f64,
    id: StrategyId,
    position: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.id.cmp(&other.id))
    }
}

/// Minimal relaxation of `d` that `k` catalog strategies satisfy.
pub fn adpar_exact(catalog: &[Strategy], d: &DeploymentRequest, k: usize) -> Result<AdparResult> {
    Ok(SweepState::new(catalog, d, k)?.run())
}
