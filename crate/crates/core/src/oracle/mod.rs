//! Exact Bayes-optimal nomination on enumerable distributions.
//!
//! Observations are pairs `(g1, o(g2))`. A [`Partition`] groups the support
//! into classes of observations that agree up to relabeling of `H`; a
//! [`SchemeTable`] stores one ranking per class on the class representative
//! and lifts it to every other observation of the class.
//!
//! When a representative has nontrivial symmetries in the mode's view the
//! lift is not unique. Under [`SymmetryPolicy::Average`] the lifted ranking
//! is uniformly random over all isomorphisms, which is what losses,
//! posteriors and entropies account for; lookups of a single ranking
//! ([`Scheme::rank`]) use the first isomorphism found.

mod consistency;
mod info;
mod loss;
mod partition;

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::featured_graph::{FeaturedGraph, HLabel, View};
use crate::models::{Assumption, EnumerableNominatableDistribution};

pub use consistency::{
    check_consistency, check_distribution_consistency, ConsistencyOptions, ConsistencyReport, ConsistencyWitness,
};
pub use info::{
    rank_entropy, rank_mutual_information, tie_break_orders, verify_information_theorem, AssumptionPolicy,
    InfoReport, InfoTarget, TheoremReport, TheoremVariant, TieBreakOutcome, INFO_TOL,
};
pub use loss::{
    class_route_loss, exhaustive_min_loss, level_k_loss, loss_report, r_k_statistic, LossReport,
};
pub use partition::{class_representatives, posterior_interest_mass, Class, Member, Partition, SymmetryPolicy};

/// Tolerance used when comparing posterior masses during greedy ranking.
pub const TIE_TOL: f64 = 1e-12;

/// Which information a scheme may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// Graphs and features.
    FeatureAware,
    /// Graphs only.
    FeatureOblivious,
    /// Vertex features only.
    NetworkOblivious,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::FeatureAware, Mode::FeatureOblivious, Mode::NetworkOblivious];

    pub fn view(self) -> View {
        match self {
            Mode::FeatureAware => View::Featured,
            Mode::FeatureOblivious => View::Topology,
            Mode::NetworkOblivious => View::VertexFeatures,
        }
    }

    /// The regularity assumption under which the mode's lift is unique.
    pub fn assumption(self) -> Assumption {
        match self {
            Mode::FeatureAware => Assumption::FeatureAsymmetry,
            Mode::FeatureOblivious => Assumption::GraphAsymmetry,
            Mode::NetworkOblivious => Assumption::DistinctRows,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Mode::FeatureAware => "FA",
            Mode::FeatureOblivious => "FO",
            Mode::NetworkOblivious => "NO",
        }
    }
}

/// A total order on the positions `0..m` of `H`, best first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RankList {
    order: Vec<usize>,
}

impl RankList {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        crate::featured_graph::VertexPermutation::new(order.clone())?;
        Ok(Self { order })
    }

    pub fn identity(m: usize) -> Self {
        Self { order: (0..m).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    /// The first `k` entries.
    pub fn prefix(&self, k: usize) -> Result<&[usize]> {
        if k > self.order.len() {
            return Err(Error::KOutOfRange { k, max: self.order.len() });
        }
        Ok(&self.order[..k])
    }

    /// 0-based rank of position `u`.
    pub fn rank_of(&self, u: usize) -> usize {
        self.order.iter().position(|&x| x == u).expect("position in range")
    }

    /// The ranking written with the labels of `H`.
    pub fn labels(&self, labels: &[HLabel]) -> Vec<HLabel> {
        self.order.iter().map(|&p| labels[p]).collect()
    }
}

/// Repeated argmax of `score` over the remaining positions; scores within
/// [`TIE_TOL`] of the maximum are tied and go to the earliest position in
/// `tie_break`.
pub fn greedy_ranking(score: &[f64], tie_break: &RankList) -> RankList {
    let m = score.len();
    let mut taken = alloc::vec![false; m];
    let mut order = Vec::with_capacity(m);
    for _ in 0..m {
        let best = (0..m).filter(|&u| !taken[u]).map(|u| score[u]).fold(f64::NEG_INFINITY, f64::max);
        let pick = tie_break
            .as_slice()
            .iter()
            .copied()
            .find(|&u| !taken[u] && score[u] >= best - TIE_TOL)
            .expect("a remaining position attains the maximum");
        taken[pick] = true;
        order.push(pick);
    }
    RankList { order }
}

/// A nomination scheme: a ranking of `H` for every observation.
pub trait Scheme {
    /// The symmetry view the scheme's consistency criterion refers to.
    fn view(&self) -> View;

    /// The ranking for the observation `(g1, observed)`, where `observed` is
    /// the obfuscated second graph on positions `0..m`.
    fn rank(&self, g1: &FeaturedGraph, observed: &FeaturedGraph) -> Result<RankList>;
}

/// A scheme stored as one ranking per class of a [`Partition`].
#[derive(Clone, Debug)]
pub struct SchemeTable {
    partition: Arc<Partition>,
    rankings: Vec<RankList>,
    tie_break: RankList,
}

impl SchemeTable {
    /// Greedy ranking by posterior interest mass in every class.
    pub fn greedy(partition: Arc<Partition>, tie_break: RankList) -> Result<Self> {
        if tie_break.len() != partition.m() {
            return Err(Error::SizeMismatch { what: "tie-break order", expected: partition.m(), found: tie_break.len() });
        }
        let rankings = partition.classes().iter().map(|c| greedy_ranking(c.posterior(), &tie_break)).collect();
        Ok(Self { partition, rankings, tie_break })
    }

    /// Explicit per-class rankings, in class order.
    pub fn from_rankings(partition: Arc<Partition>, rankings: Vec<RankList>) -> Result<Self> {
        if rankings.len() != partition.classes().len() {
            return Err(Error::SizeMismatch { what: "class rankings", expected: partition.classes().len(), found: rankings.len() });
        }
        if let Some(r) = rankings.iter().find(|r| r.len() != partition.m()) {
            return Err(Error::SizeMismatch { what: "ranking length", expected: partition.m(), found: r.len() });
        }
        let m = partition.m();
        Ok(Self { partition, rankings, tie_break: RankList::identity(m) })
    }

    /// Independent uniformly random ranking in every class. Such a table is
    /// consistent by construction, because rankings are stored per class.
    pub fn random<R: Rng + ?Sized>(partition: Arc<Partition>, rng: &mut R) -> Self {
        let m = partition.m();
        let rankings = partition
            .classes()
            .iter()
            .map(|_| {
                let mut order: Vec<usize> = (0..m).collect();
                order.shuffle(rng);
                RankList { order }
            })
            .collect();
        Self { partition, rankings, tie_break: RankList::identity(m) }
    }

    pub fn mode(&self) -> Mode {
        self.partition.mode()
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn partition_arc(&self) -> Arc<Partition> {
        self.partition.clone()
    }

    /// The ranking stored on the representative of class `c`.
    pub fn class_ranking(&self, c: usize) -> &RankList {
        &self.rankings[c]
    }

    pub fn rankings(&self) -> &[RankList] {
        &self.rankings
    }

    pub fn tie_break(&self) -> &RankList {
        &self.tie_break
    }
}

impl Scheme for SchemeTable {
    fn view(&self) -> View {
        self.mode().view()
    }

    fn rank(&self, g1: &FeaturedGraph, observed: &FeaturedGraph) -> Result<RankList> {
        let (c, lift) = self.partition.locate(g1, observed)?;
        Ok(RankList { order: self.rankings[c].order.iter().map(|&u| lift.apply(u)).collect() })
    }
}

/// Bayes-optimal scheme for `mode` with the given symmetry policy and
/// tie-break order.
pub fn bayes_scheme(
    dist: &EnumerableNominatableDistribution,
    mode: Mode,
    policy: SymmetryPolicy,
    tie_break: RankList,
) -> Result<SchemeTable> {
    let partition = Arc::new(class_representatives(dist, mode, policy)?);
    SchemeTable::greedy(partition, tie_break)
}

/// Bayes-optimal feature-aware scheme, ties broken by the order of `H`.
pub fn bayes_fa_scheme(dist: &EnumerableNominatableDistribution) -> Result<SchemeTable> {
    bayes_scheme(dist, Mode::FeatureAware, SymmetryPolicy::Average, RankList::identity(dist.m()))
}

/// Bayes-optimal feature-oblivious scheme, ties broken by the order of `H`.
pub fn bayes_fo_scheme(dist: &EnumerableNominatableDistribution) -> Result<SchemeTable> {
    bayes_scheme(dist, Mode::FeatureOblivious, SymmetryPolicy::Average, RankList::identity(dist.m()))
}

/// Bayes-optimal network-oblivious scheme, ties broken by the order of `H`.
pub fn bayes_no_scheme(dist: &EnumerableNominatableDistribution) -> Result<SchemeTable> {
    bayes_scheme(dist, Mode::NetworkOblivious, SymmetryPolicy::Average, RankList::identity(dist.m()))
}
