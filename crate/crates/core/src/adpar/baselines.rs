use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rstar::primitives::GeomWithData;
use rstar::{RTree, RTreeNode};

use super::{
    check_cardinality, distance_squared, envelope, finish, finish_with, relaxation, AdparResult,
};
use crate::error::Result;
use crate::model::{normalize, Axis, DeploymentRequest, Strategy};

/// Relaxes a single parameter.
///
/// For each axis, only strategies that already meet the other two thresholds
/// are eligible; the axis is loosened to the `k`-th smallest requirement among
/// them. Returns the cheapest axis, or `None` when no axis has `k` eligible
/// strategies.
pub fn baseline_one_dim(
    catalog: &[Strategy],
    d: &DeploymentRequest,
    k: usize,
) -> Result<Option<AdparResult>> {
    check_cardinality(catalog, k)?;
    let relax: Vec<[f64; 3]> = catalog.iter().map(|s| relaxation(s, d)).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for axis in Axis::ALL {
        let a = axis.index();
        let mut eligible: Vec<usize> = (0..catalog.len())
            .filter(|&j| (0..3).all(|b| b == a || relax[j][b] == 0.0))
            .collect();
        if eligible.len() < k {
            continue;
        }
        eligible.sort_by(|&x, &y| {
            relax[x][a]
                .total_cmp(&relax[y][a])
                .then(catalog[x].id().cmp(&catalog[y].id()))
        });
        eligible.truncate(k);
        let cost = relax[eligible[k - 1]][a];
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, eligible));
        }
    }
    Ok(best.map(|(_, picked)| finish(catalog, d, k, &picked)))
}

type Entry = GeomWithData<[f64; 3], usize>;

/// Minimum-bounding-box baseline over an R-tree of the normalized strategies.
///
/// Every tree node (leaves included) is a candidate group. A node holding
/// exactly `k` strategies yields the corner of its box joined with `d`; the
/// closest such node wins. Without one, the smallest node holding at least
/// `k` strategies is used: its whole box sets the alternative and `k` of its
/// members are drawn with `seed`.
pub fn baseline_mbb(
    catalog: &[Strategy],
    d: &DeploymentRequest,
    k: usize,
    seed: u64,
) -> Result<AdparResult> {
    check_cardinality(catalog, k)?;
    let entries: Vec<Entry> = catalog
        .iter()
        .enumerate()
        .map(|(j, s)| GeomWithData::new(normalize(s).as_array(), j))
        .collect();
    let tree = RTree::bulk_load(entries);

    let mut groups: Vec<Vec<usize>> = Vec::new();
    collect(tree.root().children(), &mut groups);
    groups.push(all_members(tree.root().children()));

    let score = |members: &[usize]| {
        distance_squared(d, &envelope(d, k, members.iter().map(|&j| &catalog[j])))
    };

    let exact = groups
        .iter()
        .filter(|g| g.len() == k)
        .map(|g| (score(g), g))
        .min_by(|a, b| a.0.total_cmp(&b.0));
    if let Some((_, g)) = exact {
        return Ok(finish(catalog, d, k, g));
    }

    let (_, group) = groups
        .iter()
        .filter(|g| g.len() >= k)
        .map(|g| ((g.len(), score(g)), g))
        .min_by(|a, b| a.0 .0.cmp(&b.0 .0).then(a.0 .1.total_cmp(&b.0 .1)))
        .expect("the root holds the whole catalog");
    let mut members = group.clone();
    members.sort_by_key(|&j| catalog[j].id());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked: Vec<usize> = sample(&mut rng, members.len(), k)
        .into_iter()
        .map(|i| members[i])
        .collect();
    let alternative = envelope(d, k, members.iter().map(|&j| &catalog[j]));
    Ok(finish_with(catalog, d, alternative, &picked))
}

fn all_members(nodes: &[RTreeNode<Entry>]) -> Vec<usize> {
    let mut out = Vec::new();
    for node in nodes {
        match node {
            RTreeNode::Leaf(e) => out.push(e.data),
            RTreeNode::Parent(p) => out.extend(all_members(p.children())),
        }
    }
    out
}

fn collect(nodes: &[RTreeNode<Entry>], groups: &mut Vec<Vec<usize>>) {
    for node in nodes {
        match node {
            RTreeNode::Leaf(e) => groups.push(vec![e.data]),
            RTreeNode::Parent(p) => {
                groups.push(all_members(p.children()));
                collect(p.children(), groups);
            }
        }
    }
}
