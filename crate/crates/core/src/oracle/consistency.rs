use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::{RankList, Scheme, SchemeTable};
use crate::error::{Error, Result};
use crate::featured_graph::{obfuscate, orbits, FeaturedGraph, Obfuscation, VertexPermutation};
use crate::models::EnumerableNominatableDistribution;
use crate::rng::stream_rng;

/// An orbit whose set of ranks differs between two obfuscations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyWitness {
    /// Support entry the graphs came from, when checking a distribution.
    pub point: Option<usize>,
    /// Vertex-to-position maps of the two obfuscations.
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    /// The orbit, as vertices of the second graph.
    pub orbit: Vec<usize>,
    /// 1-based ranks occupied by the orbit under each obfuscation, sorted.
    pub ranks_first: Vec<usize>,
    pub ranks_second: Vec<usize>,
}

/// Result of checking a scheme over a distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub points_checked: usize,
    pub obfuscations_per_point: usize,
    /// True when every obfuscation of `H` was tried.
    pub exhaustive: bool,
    pub witnesses: Vec<ConsistencyWitness>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Which obfuscations and support entries a distribution-level check visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConsistencyOptions {
    /// Number of random obfuscations compared against the identity when the
    /// check is not exhaustive.
    pub random_obfuscations: usize,
    /// Orders up to this value try every obfuscation.
    pub exhaustive_limit: usize,
    pub seed: u64,
    /// Check every support entry instead of one per class.
    pub all_points: bool,
}

impl Default for ConsistencyOptions {
    fn default() -> Self {
        Self { random_obfuscations: 10, exhaustive_limit: 5, seed: 0, all_points: false }
    }
}

fn rank_set(ranking: &RankList, o: &Obfuscation, orbit: &[usize]) -> Vec<usize> {
    let mut ranks: Vec<usize> = orbit.iter().map(|&w| ranking.rank_of(o.position_of(w)) + 1).collect();
    ranks.sort_unstable();
    ranks
}

/// Compares every obfuscation in `obfuscations` against the first: for each
/// orbit of `g2` (under the scheme's view) the set of ranks it occupies must
/// not depend on the obfuscation. Returns every violating orbit.
pub fn check_consistency<S: Scheme + ?Sized>(
    scheme: &S,
    g1: &FeaturedGraph,
    g2: &FeaturedGraph,
    obfuscations: &[Obfuscation],
) -> Result<Vec<ConsistencyWitness>> {
    let base = obfuscations.first().ok_or(Error::Empty("obfuscation list"))?;
    let cells = orbits(g2, scheme.view())?;
    let base_rank = scheme.rank(g1, &obfuscate(g2, base)?.graph)?;
    let mut witnesses = Vec::new();
    for o in &obfuscations[1..] {
        let rank = scheme.rank(g1, &obfuscate(g2, o)?.graph)?;
        for orbit in &cells {
            let a = rank_set(&base_rank, base, orbit);
            let b = rank_set(&rank, o, orbit);
            if a != b {
                witnesses.push(ConsistencyWitness {
                    point: None,
                    first: base.as_permutation().as_slice().to_vec(),
                    second: o.as_permutation().as_slice().to_vec(),
                    orbit: orbit.clone(),
                    ranks_first: a,
                    ranks_second: b,
                });
            }
        }
    }
    Ok(witnesses)
}

/// The obfuscations visited by a distribution-level check: all of them for
/// small orders, otherwise the identity plus seeded random ones.
fn obfuscation_set(m: usize, opts: &ConsistencyOptions) -> (Vec<Obfuscation>, bool) {
    if m <= opts.exhaustive_limit {
        return (VertexPermutation::all(m).iter().map(Obfuscation::from_permutation).collect(), true);
    }
    let mut rng = stream_rng(opts.seed, 0);
    let mut out = alloc::vec![Obfuscation::identity(m)];
    for _ in 0..opts.random_obfuscations {
        let mut map: Vec<usize> = (0..m).collect();
        map.shuffle(&mut rng);
        out.push(Obfuscation::from_permutation(&VertexPermutation::new(map).expect("shuffled identity")));
    }
    (out, false)
}

/// Checks a scheme table on the support of `dist`.
pub fn check_distribution_consistency(
    scheme: &SchemeTable,
    dist: &EnumerableNominatableDistribution,
    opts: &ConsistencyOptions,
) -> Result<ConsistencyReport> {
    let (obfuscations, exhaustive) = obfuscation_set(dist.m(), opts);
    let points: Vec<usize> = if opts.all_points {
        (0..dist.support().len()).collect()
    } else {
        scheme.partition().classes().iter().map(|c| c.members()[0].point).collect()
    };
    let mut witnesses = Vec::new();
    for &i in &points {
        let s = &dist.support()[i];
        for mut w in check_consistency(scheme, &s.g1, &s.g2, &obfuscations)? {
            w.point = Some(i);
            witnesses.push(w);
        }
    }
    Ok(ConsistencyReport {
        points_checked: points.len(),
        obfuscations_per_point: obfuscations.len(),
        exhaustive,
        witnesses,
    })
}
