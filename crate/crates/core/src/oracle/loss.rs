use alloc::vec;
use alloc::vec::Vec;

use super::{Mode, Partition, SchemeTable};
use crate::error::{Error, Result};
use crate::featured_graph::VertexPermutation;
use crate::models::EnumerableNominatableDistribution;
use crate::sum::KahanSum;

/// Largest obfuscated order accepted by [`exhaustive_min_loss`].
const EXHAUSTIVE_LIMIT: usize = 6;

/// Level-k losses of one scheme over a grid of `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LossReport {
    pub mode: Mode,
    pub ks: Vec<usize>,
    pub losses: Vec<f64>,
}

fn check_k(k: usize, m: usize) -> Result<()> {
    if k == 0 || k > m {
        Err(Error::KOutOfRange { k, max: m })
    } else {
        Ok(())
    }
}

fn check_matches(partition: &Partition, dist: &EnumerableNominatableDistribution) -> Result<()> {
    if partition.class_of().len() != dist.support().len() || partition.m() != dist.m() {
        return Err(Error::SizeMismatch {
            what: "support of the scheme's partition",
            expected: dist.support().len(),
            found: partition.class_of().len(),
        });
    }
    Ok(())
}

fn interest_mask(partition: &Partition) -> Vec<bool> {
    let mut mask = vec![false; partition.m()];
    partition.interest().iter().for_each(|&t| mask[t] = true);
    mask
}

/// Expected number of obfuscated vertices of interest among the first `k`
/// entries of `ranking`, summed over the class members with their masses.
fn class_hits(
    partition: &Partition,
    dist: &EnumerableNominatableDistribution,
    class: usize,
    ranking: &[usize],
    mask: &[bool],
) -> f64 {
    let c = &partition.classes()[class];
    let share = 1.0 / c.automorphisms().len() as f64;
    let mut hits = KahanSum::new();
    for member in c.members() {
        let p = dist.support()[member.point].p;
        for a in c.automorphisms() {
            let count = ranking.iter().filter(|&&u| mask[member.lift.apply(a.apply(u))]).count();
            hits.add(p * share * count as f64);
        }
    }
    hits.value()
}

/// Level-k nomination loss `1 − (1/k)·Σ_{v∈V*} P(rank of o(v) ≤ k)`,
/// summed over support entries.
pub fn level_k_loss(scheme: &SchemeTable, dist: &EnumerableNominatableDistribution, k: usize) -> Result<f64> {
    let partition = scheme.partition();
    check_k(k, partition.m())?;
    check_matches(partition, dist)?;
    let mask = interest_mask(partition);
    let mut hits = KahanSum::new();
    for c in 0..partition.classes().len() {
        hits.add(class_hits(partition, dist, c, scheme.class_ranking(c).prefix(k)?, &mask));
    }
    Ok(1.0 - hits.value() / k as f64)
}

/// `R_k` of a class: the summed posterior interest mass of the first `k`
/// positions of the class ranking.
pub fn r_k_statistic(scheme: &SchemeTable, class: usize, k: usize) -> Result<f64> {
    let partition = scheme.partition();
    check_k(k, partition.m())?;
    let c = partition.classes().get(class).ok_or(Error::UnknownObservation)?;
    let mut r = KahanSum::new();
    for &u in scheme.class_ranking(class).prefix(k)? {
        r.add(c.posterior()[u]);
    }
    Ok(r.value())
}

/// Loss through the class decomposition `1 − (1/k)·Σ_classes mass·R_k`.
pub fn class_route_loss(scheme: &SchemeTable, k: usize) -> Result<f64> {
    let partition = scheme.partition();
    let mut total = KahanSum::new();
    for (c, class) in partition.classes().iter().enumerate() {
        total.add(class.mass() * r_k_statistic(scheme, c, k)?);
    }
    Ok(1.0 - total.value() / k as f64)
}

/// Minimum level-k loss over all per-class ranking tables, found by scanning
/// every ranking of `H` in every class and counting hits member by member.
pub fn exhaustive_min_loss(partition: &Partition, dist: &EnumerableNominatableDistribution, k: usize) -> Result<f64> {
    let m = partition.m();
    check_k(k, m)?;
    check_matches(partition, dist)?;
    if m > EXHAUSTIVE_LIMIT {
        return Err(Error::SearchLimit { order: m, limit: EXHAUSTIVE_LIMIT });
    }
    let mask = interest_mask(partition);
    let rankings = VertexPermutation::all(m);
    let mut hits = KahanSum::new();
    for c in 0..partition.classes().len() {
        let best = rankings
            .iter()
            .map(|r| class_hits(partition, dist, c, &r.as_slice()[..k], &mask))
            .fold(0.0f64, f64::max);
        hits.add(best);
    }
    Ok(1.0 - hits.value() / k as f64)
}

/// Losses of `scheme` at every `k` in `ks`.
pub fn loss_report(scheme: &SchemeTable, dist: &EnumerableNominatableDistribution, ks: &[usize]) -> Result<LossReport> {
    let losses = ks.iter().map(|&k| level_k_loss(scheme, dist, k)).collect::<Result<Vec<_>>>()?;
    Ok(LossReport { mode: scheme.mode(), ks: ks.to_vec(), losses })
}
