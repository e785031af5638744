//! Domain types shared by every other module: strategies, deployment
//! requests, worker availability and the threshold predicate.
//!
//! All parameters are fractions in `[0, 1]`. Quality is a lower bound on a
//! request and a "larger is better" value on a strategy; cost and latency are
//! upper bounds. [`NormalizedPoint`] flips quality to `1 - quality` so that
//! every axis reads "smaller is better" and coverage becomes a componentwise
//! `<=`.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Tolerance on the total probability mass of an [`AvailabilityPdf`].
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrategyId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RequestId(pub u32);

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for RequestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One of the three deployment parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    Quality,
    Cost,
    Latency,
}

impl Axis {
    /// Fixed axis order, also used to break ties between equal relaxations.
    pub const ALL: [Axis; 3] = [Axis::Quality, Axis::Cost, Axis::Latency];

    pub fn index(self) -> usize {
        match self {
            Axis::Quality => 0,
            Axis::Cost => 1,
            Axis::Latency => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::Quality => "quality",
            Axis::Cost => "cost",
            Axis::Latency => "latency",
        }
    }

    pub fn parse(s: &str) -> Option<Axis> {
        match s.trim().to_ascii_lowercase().as_str() {
            "quality" | "q" => Some(Axis::Quality),
            "cost" | "c" => Some(Axis::Cost),
            "latency" | "l" => Some(Axis::Latency),
            _ => None,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_fraction(what: &str, name: &str, v: f64) -> Result<()> {
    if v.is_finite() && (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::validation(
            what,
            format!("{name} = {v} is outside [0, 1]"),
        ))
    }
}

/// A deployment strategy, reduced to its estimated (quality, cost, latency).
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    id: StrategyId,
    quality: f64,
    cost: f64,
    latency: f64,
    label: Option<String>,
}

impl Strategy {
    pub fn new(id: u32, quality: f64, cost: f64, latency: f64) -> Result<Self> {
        let what = format!("strategy {id}");
        check_fraction(&what, "quality", quality)?;
        check_fraction(&what, "cost", cost)?;
        check_fraction(&what, "latency", latency)?;
        Ok(Strategy {
            id: StrategyId(id),
            quality,
            cost,
            latency,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn id(&self) -> StrategyId {
        self.id
    }
    pub fn quality(&self) -> f64 {
        self.quality
    }
    pub fn cost(&self) -> f64 {
        self.cost
    }
    pub fn latency(&self) -> f64 {
        self.latency
    }
    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Raw (un-normalized) value on `axis`.
    pub fn value(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Quality => self.quality,
            Axis::Cost => self.cost,
            Axis::Latency => self.latency,
        }
    }
}

/// A requester's thresholds plus the number of strategies wanted.
#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentRequest {
    id: RequestId,
    quality: f64,
    cost: f64,
    latency: f64,
    k: usize,
    payoff: f64,
}

impl DeploymentRequest {
    /// Builds a request whose pay-off defaults to its cost threshold.
    pub fn new(id: u32, quality: f64, cost: f64, latency: f64, k: usize) -> Result<Self> {
        Self::with_payoff(id, quality, cost, latency, k, cost)
    }

    pub fn with_payoff(
        id: u32,
        quality: f64,
        cost: f64,
        latency: f64,
        k: usize,
        payoff: f64,
    ) -> Result<Self> {
        let what = format!("request {id}");
        check_fraction(&what, "quality", quality)?;
        check_fraction(&what, "cost", cost)?;
        check_fraction(&what, "latency", latency)?;
        if k == 0 {
            return Err(Error::validation(what, "k must be at least 1"));
        }
        if !(payoff.is_finite() && payoff >= 0.0) {
            return Err(Error::validation(
                what,
                format!("payoff = {payoff} must be >= 0"),
            ));
        }
        Ok(DeploymentRequest {
            id: RequestId(id),
            quality,
            cost,
            latency,
            k,
            payoff,
        })
    }

    pub fn id(&self) -> RequestId {
        self.id
    }
    pub fn quality(&self) -> f64 {
        self.quality
    }
    pub fn cost(&self) -> f64 {
        self.cost
    }
    pub fn latency(&self) -> f64 {
        self.latency
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn payoff(&self) -> f64 {
        self.payoff
    }

    pub fn threshold(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Quality => self.quality,
            Axis::Cost => self.cost,
            Axis::Latency => self.latency,
        }
    }
}

/// Discrete distribution over the fraction of suitable workers available.
#[derive(Debug, Clone, PartialEq)]
pub struct AvailabilityPdf {
    outcomes: Vec<(f64, f64)>,
}

impl AvailabilityPdf {
    /// `outcomes` are `(probability, fraction)` pairs.
    pub fn new(outcomes: Vec<(f64, f64)>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::validation("availability pdf", "no outcomes"));
        }
        let mut total = 0.0;
        for (i, &(p, w)) in outcomes.iter().enumerate() {
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(Error::validation(
                    "availability pdf",
                    format!("outcome {i}: probability {p} is outside [0, 1]"),
                ));
            }
            if !(w.is_finite() && (0.0..=1.0).contains(&w)) {
                return Err(Error::validation(
                    "availability pdf",
                    format!("outcome {i}: fraction {w} is outside [0, 1]"),
                ));
            }
            total += p;
        }
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(Error::validation(
                "availability pdf",
                format!("probabilities sum to {total}, not 1"),
            ));
        }
        Ok(AvailabilityPdf { outcomes })
    }

    pub fn outcomes(&self) -> &[(f64, f64)] {
        &self.outcomes
    }

    pub fn expected(&self) -> f64 {
        let e: f64 = self.outcomes.iter().map(|&(p, w)| p * w).sum();
        e.clamp(0.0, 1.0)
    }
}

/// Expected available workforce `W` of a distribution.
pub fn expected_availability(pdf: &AvailabilityPdf) -> f64 {
    pdf.expected()
}

/// Coordinates in the unified "smaller is better" space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedPoint {
    pub q: f64,
    pub c: f64,
    pub l: f64,
}

impl NormalizedPoint {
    pub fn get(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Quality => self.q,
            Axis::Cost => self.c,
            Axis::Latency => self.l,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.q, self.c, self.l]
    }

    /// Componentwise `<=`: `self` lies inside the box anchored at the origin
    /// with corner `other`.
    pub fn dominated_by(&self, other: &NormalizedPoint) -> bool {
        self.q <= other.q && self.c <= other.c && self.l <= other.l
    }
}

pub fn normalize(s: &Strategy) -> NormalizedPoint {
    NormalizedPoint {
        q: 1.0 - s.quality,
        c: s.cost,
        l: s.latency,
    }
}

pub fn normalize_request(d: &DeploymentRequest) -> NormalizedPoint {
    NormalizedPoint {
        q: 1.0 - d.quality,
        c: d.cost,
        l: d.latency,
    }
}

/// Inverse of [`normalize`].
pub fn denormalize(id: StrategyId, p: &NormalizedPoint) -> Result<Strategy> {
    Strategy::new(id.0, (1.0 - p.q).clamp(0.0, 1.0), p.c, p.l)
}

/// `s` meets every threshold of `d`; ties count as satisfied.
pub fn satisfies(s: &Strategy, d: &DeploymentRequest) -> bool {
    s.quality >= d.quality && s.cost <= d.cost && s.latency <= d.latency
}

/// Ids of catalog strategies that satisfy `d`, in catalog order.
pub fn feasible_strategies(catalog: &[Strategy], d: &DeploymentRequest) -> Vec<StrategyId> {
    catalog
        .iter()
        .filter(|s| satisfies(s, d))
        .map(Strategy::id)
        .collect()
}

/// Rejects catalogs with duplicate ids.
pub fn validate_catalog(catalog: &[Strategy]) -> Result<()> {
    let mut seen = HashSet::with_capacity(catalog.len());
    for s in catalog {
        if !seen.insert(s.id) {
            return Err(Error::validation(
                "strategy catalog",
                format!("duplicate strategy id {}", s.id),
            ));
        }
    }
    Ok(())
}

/// Rejects batches with duplicate request ids.
pub fn validate_batch(batch: &[DeploymentRequest]) -> Result<()> {
    let mut seen = HashSet::with_capacity(batch.len());
    for d in batch {
        if !seen.insert(d.id) {
            return Err(Error::validation(
                "request batch",
                format!("duplicate request id {}", d.id),
            ));
        }
    }
    Ok(())
}

/// The four strategies and three requests of the running translation example.
pub mod example {
    use super::*;

    pub fn catalog() -> Vec<Strategy> {
        vec![
            Strategy::new(1, 0.5, 0.25, 0.28)
                .unwrap()
                .with_label("SIM-COL-CRO"),
            Strategy::new(2, 0.75, 0.33, 0.28)
                .unwrap()
                .with_label("SEQ-IND-CRO"),
            Strategy::new(3, 0.8, 0.5, 0.14)
                .unwrap()
                .with_label("SIM-IND-CRO"),
            Strategy::new(4, 0.88, 0.58, 0.14)
                .unwrap()
                .with_label("SIM-IND-HYB"),
        ]
    }

    pub fn requests(k: usize) -> Vec<DeploymentRequest> {
        vec![
            DeploymentRequest::new(1, 0.4, 0.17, 0.28, k).unwrap(),
            DeploymentRequest::new(2, 0.8, 0.2, 0.28, k).unwrap(),
            DeploymentRequest::new(3, 0.7, 0.83, 0.28, k).unwrap(),
        ]
    }

    /// 50% chance of 700 and 50% chance of 900 out of 1000 suitable workers.
    pub fn availability() -> AvailabilityPdf {
        AvailabilityPdf::new(vec![(0.5, 0.7), (0.5, 0.9)]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::{prop_assert, prop_assert_eq, proptest};

    #[test]
    fn expected_availability_examples() {
        let pdf = AvailabilityPdf::new(vec![(0.5, 0.7), (0.5, 0.9)]).unwrap();
        assert!((expected_availability(&pdf) - 0.8).abs() < 1e-12);
        let pdf = AvailabilityPdf::new(vec![(0.7, 0.07), (0.3, 0.02)]).unwrap();
        assert!((expected_availability(&pdf) - 0.055).abs() < 1e-12);
        let pdf = AvailabilityPdf::new(vec![(1.0, 0.42)]).unwrap();
        assert_eq!(expected_availability(&pdf), 0.42);
    }

    #[test]
    fn invalid_pdfs_name_the_offending_entry() {
        let err = AvailabilityPdf::new(vec![(0.5, 0.7), (0.4, 0.9)]).unwrap_err();
        assert!(err.to_string().contains("sum to"));
        let err = AvailabilityPdf::new(vec![(0.5, 0.7), (0.5, 1.2)]).unwrap_err();
        assert!(err.to_string().contains("outcome 1"), "{err}");
        assert!(AvailabilityPdf::new(vec![]).is_err());
    }

    #[test]
    fn satisfies_table_values() {
        let cat = example::catalog();
        let reqs = example::requests(3);
        assert!(satisfies(&cat[1], &reqs[2]));
        assert!(!satisfies(&cat[0], &reqs[0]));
        let s = Strategy::new(9, 0.6, 0.3, 0.2).unwrap();
        let d = DeploymentRequest::new(9, 0.6, 0.3, 0.2, 1).unwrap();
        assert!(satisfies(&s, &d));
    }

    #[test]
    fn d3_feasible_set() {
        let ids = feasible_strategies(&example::catalog(), &example::requests(3)[2]);
        assert_eq!(ids, vec![StrategyId(2), StrategyId(3), StrategyId(4)]);
    }

    #[test]
    fn normalize_examples() {
        let p = normalize(&Strategy::new(0, 1.0, 0.3, 0.2).unwrap());
        assert_eq!(
            p,
            NormalizedPoint {
                q: 0.0,
                c: 0.3,
                l: 0.2
            }
        );
        let p = normalize_request(&example::requests(3)[1]);
        assert!((p.q - 0.2).abs() < 1e-15);
        assert_eq!((p.c, p.l), (0.2, 0.28));
    }

    #[test]
    fn constructors_reject_bad_values() {
        assert!(Strategy::new(1, 1.1, 0.0, 0.0).is_err());
        assert!(Strategy::new(1, 0.5, f64::NAN, 0.0).is_err());
        assert!(DeploymentRequest::new(1, 0.5, 0.5, 0.5, 0).is_err());
        assert!(DeploymentRequest::with_payoff(1, 0.5, 0.5, 0.5, 1, -1.0).is_err());
        let cat = vec![
            Strategy::new(1, 0.5, 0.5, 0.5).unwrap(),
            Strategy::new(1, 0.6, 0.5, 0.5).unwrap(),
        ];
        assert!(validate_catalog(&cat).is_err());
    }

    proptest! {
        #[test]
        fn satisfies_iff_normalized_dominance(
            sq in 0u32..=100, sc in 0u32..=100, sl in 0u32..=100,
            dq in 0u32..=100, dc in 0u32..=100, dl in 0u32..=100,
        ) {
            // A coarse grid so that ties on the boundary show up often.
            let f = |x: u32| x as f64 / 100.0;
            let s = Strategy::new(0, f(sq), f(sc), f(sl)).unwrap();
            let d = DeploymentRequest::new(0, f(dq), f(dc), f(dl), 1).unwrap();
            prop_assert_eq!(satisfies(&s, &d), normalize(&s).dominated_by(&normalize_request(&d)));
        }

        #[test]
        fn expectation_is_linear_in_mixtures(
            a in proptest::collection::vec((0.01..1.0f64, 0.0..=1.0f64), 1..6),
            b in proptest::collection::vec((0.01..1.0f64, 0.0..=1.0f64), 1..6),
            lambda in 0.0..=1.0f64,
        ) {
            let norm = |v: Vec<(f64, f64)>| {
                let t: f64 = v.iter().map(|x| x.0).sum();
                v.into_iter().map(|(p, w)| (p / t, w)).collect::<Vec<_>>()
            };
            let (a, b) = (norm(a), norm(b));
            let mix: Vec<_> = a.iter().map(|&(p, w)| (lambda * p, w))
                .chain(b.iter().map(|&(p, w)| ((1.0 - lambda) * p, w)))
                .collect();
            let ea = AvailabilityPdf::new(a).unwrap().expected();
            let eb = AvailabilityPdf::new(b).unwrap().expected();
            let em = AvailabilityPdf::new(mix).unwrap().expected();
            prop_assert!((em - (lambda * ea + (1.0 - lambda) * eb)).abs() < 1e-12);
        }

        #[test]
        fn normalize_round_trips(q in 0.0..=1.0f64, c in 0.0..=1.0f64, l in 0.0..=1.0f64) {
            let s = Strategy::new(7, q, c, l).unwrap();
            let back = denormalize(s.id(), &normalize(&s)).unwrap();
            prop_assert!((back.quality() - q).abs() <= 1e-15);
            prop_assert_eq!((back.cost(), back.latency()), (c, l));
        }
    }
}
