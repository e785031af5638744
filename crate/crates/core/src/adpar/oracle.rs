use itertools::Itertools;

use super::{check_cardinality, distance_squared, envelope, finish, AdparResult};
use crate::error::{Error, Result};
use crate::model::{DeploymentRequest, Strategy};

/// Default largest number of `k`-subsets [`adpar_brute`] will enumerate.
pub const DEFAULT_SUBSET_CAP: u128 = 1_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Exhaustive search over every `k`-subset of the catalog.
///
/// Each subset is scored by the distance of its envelope with `d`; ties go to
/// the lexicographically smallest list of ids.
pub fn adpar_brute(
    catalog: &[Strategy],
    d: &DeploymentRequest,
    k: usize,
    cap: u128,
) -> Result<AdparResult> {
    check_cardinality(catalog, k)?;
    let subsets = binomial(catalog.len(), k);
    if subsets > cap {
        return Err(Error::SizeCap {
            what: "brute-force strategy subsets",
            needed: subsets,
            cap,
        });
    }
    // Enumerating positions sorted by id yields subsets in lexicographic id
    // order, so keeping the first strict minimum implements the tie-break.
    let order: Vec<usize> = (0..catalog.len())
        .sorted_by_key(|&j| catalog[j].id())
        .collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for subset in order.iter().copied().combinations(k) {
        let alt = envelope(d, k, subset.iter().map(|&j| &catalog[j]));
        let score = distance_squared(d, &alt);
        if best.as_ref().is_none_or(|(b, _)| score < *b) {
            best = Some((score, subset));
        }
    }
    let (_, picked) = best.expect("at least one subset");
    Ok(finish(catalog, d, k, &picked))
}
