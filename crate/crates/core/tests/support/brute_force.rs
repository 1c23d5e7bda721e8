//! Level-k Bayes loss by brute force over every relabeling of the second
//! graph, sharing no code with the library's partition.

use std::collections::BTreeMap;

use featnom_core::featured_graph::{FeaturedGraph, VertexPermutation, View};
use featnom_core::models::EnumerableNominatableDistribution;

fn encode(g: &FeaturedGraph, inverse: &[usize]) -> Vec<u64> {
    let n = g.n();
    let mut code = Vec::new();
    for &a in &inverse[..n] {
        code.extend(g.vertex_row(a).iter().map(|s| u64::from(s.0)));
    }
    for a in 0..n {
        for b in a + 1..n {
            code.extend(g.edge_row(inverse[a], inverse[b]).iter().map(|s| s.map_or(u64::MAX, |s| u64::from(s.0))));
        }
    }
    code
}

/// Interest mass by position of the canonical relabeling, per observation
/// key. Mass is spread evenly over every relabeling that attains the
/// lexicographically smallest code.
pub fn canonical_masses(dist: &EnumerableNominatableDistribution, view: View) -> BTreeMap<(Vec<u64>, Vec<u64>), Vec<f64>> {
    let m = dist.m();
    let perms = VertexPermutation::all(m);
    let mut table: BTreeMap<(Vec<u64>, Vec<u64>), Vec<f64>> = BTreeMap::new();
    for point in dist.support() {
        let g1 = view.project(&point.g1);
        let g2 = view.project(&point.g2);
        let first = encode(&g1, &(0..g1.n()).collect::<Vec<_>>());
        let coded: Vec<(Vec<u64>, &VertexPermutation)> =
            perms.iter().map(|s| (encode(&g2, s.inverse().as_slice()), s)).collect();
        let best = coded.iter().map(|c| &c.0).min().expect("at least one relabeling").clone();
        let winners: Vec<&VertexPermutation> = coded.iter().filter(|c| c.0 == best).map(|c| c.1).collect();
        let share = point.p / winners.len() as f64;
        let entry = table.entry((first, best)).or_insert_with(|| vec![0.0; m]);
        for sigma in winners {
            for &t in dist.interest() {
                entry[sigma.apply(t)] += share;
            }
        }
    }
    table
}

/// `1 − (1/k) Σ_keys` of the `k` largest position masses.
pub fn brute_force_loss(dist: &EnumerableNominatableDistribution, view: View, k: usize) -> f64 {
    let hits: f64 = canonical_masses(dist, view)
        .values()
        .map(|masses| {
            let mut sorted = masses.clone();
            sorted.sort_by(|a, b| b.total_cmp(a));
            sorted[..k].iter().sum::<f64>()
        })
        .sum();
    1.0 - hits / k as f64
}
