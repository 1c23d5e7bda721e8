use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{class_representatives, level_k_loss, Class, Mode, RankList, SchemeTable, SymmetryPolicy};
use crate::error::{Error, Result};
use crate::featured_graph::{FeaturedGraph, VertexPermutation, View};
use crate::models::{Assumption, EnumerableNominatableDistribution};
use crate::sum::{kahan_sum, KahanSum};

/// Tolerance for equality of losses, entropies and informations.
pub const INFO_TOL: f64 = 1e-9;

/// Orders up to this value try every tie-break order.
const EXHAUSTIVE_TIE_BREAKS: usize = 4;

/// The variable the rank prefix is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InfoTarget {
    /// The pair of graphs without features.
    Graphs,
    /// The pair of vertex-feature matrices.
    VertexFeatures,
}

impl InfoTarget {
    fn view(self) -> View {
        match self {
            InfoTarget::Graphs => View::Topology,
            InfoTarget::VertexFeatures => View::VertexFeatures,
        }
    }
}

/// Entropy of a length-`k` rank prefix and its information about a target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InfoReport {
    pub k: usize,
    pub entropy: f64,
    pub mutual_information: f64,
    pub target: Option<InfoTarget>,
}

impl InfoReport {
    /// `H − I`, nonnegative up to rounding.
    pub fn gap(&self) -> f64 {
        self.entropy - self.mutual_information
    }
}

fn entropy_of<K>(masses: &BTreeMap<K, KahanSum>) -> f64 {
    -kahan_sum(masses.values().map(|s| s.value()).filter(|&p| p > 0.0).map(|p| p * libm::log2(p)))
}

/// Calls `f(point, prefix, weight)` for every support entry and every lift of
/// the class ranking, with the mass shared evenly among lifts.
fn for_each_prefix<F>(scheme: &SchemeTable, dist: &EnumerableNominatableDistribution, k: usize, mut f: F) -> Result<()>
where
    F: FnMut(usize, Vec<usize>, f64),
{
    let partition = scheme.partition();
    if k == 0 || k > partition.m() {
        return Err(Error::KOutOfRange { k, max: partition.m() });
    }
    if partition.class_of().len() != dist.support().len() {
        return Err(Error::SizeMismatch {
            what: "support of the scheme's partition",
            expected: dist.support().len(),
            found: partition.class_of().len(),
        });
    }
    for (c, class) in partition.classes().iter().enumerate() {
        let prefix = scheme.class_ranking(c).prefix(k)?;
        let share = 1.0 / class.automorphisms().len() as f64;
        for member in class.members() {
            let p = dist.support()[member.point].p;
            for a in class.automorphisms() {
                f(member.point, Class::lifted(&member.lift, a, prefix), p * share);
            }
        }
    }
    Ok(())
}

/// Exact entropy in bits of the length-`k` prefix of the scheme's ranking.
pub fn rank_entropy(scheme: &SchemeTable, dist: &EnumerableNominatableDistribution, k: usize) -> Result<InfoReport> {
    let mut masses: BTreeMap<Vec<usize>, KahanSum> = BTreeMap::new();
    for_each_prefix(scheme, dist, k, |_, prefix, w| masses.entry(prefix).or_default().add(w))?;
    let entropy = entropy_of(&masses);
    Ok(InfoReport { k, entropy, mutual_information: 0.0, target: None })
}

/// Exact entropy of the length-`k` prefix and its mutual information in bits
/// with `target`, as `H(X) + H(T) − H(X, T)`.
pub fn rank_mutual_information(
    scheme: &SchemeTable,
    dist: &EnumerableNominatableDistribution,
    k: usize,
    target: InfoTarget,
) -> Result<InfoReport> {
    let view = target.view();
    let keys: Vec<(FeaturedGraph, FeaturedGraph)> =
        dist.support().iter().map(|s| (view.project(&s.g1), view.project(&s.g2))).collect();
    let mut ids: BTreeMap<&(FeaturedGraph, FeaturedGraph), usize> = BTreeMap::new();
    let target_of: Vec<usize> = keys
        .iter()
        .map(|key| {
            let next = ids.len();
            *ids.entry(key).or_insert(next)
        })
        .collect();

    let mut prefix: BTreeMap<Vec<usize>, KahanSum> = BTreeMap::new();
    let mut joint: BTreeMap<(usize, Vec<usize>), KahanSum> = BTreeMap::new();
    let mut marginal: BTreeMap<usize, KahanSum> = BTreeMap::new();
    for_each_prefix(scheme, dist, k, |i, x, w| {
        prefix.entry(x.clone()).or_default().add(w);
        joint.entry((target_of[i], x)).or_default().add(w);
        marginal.entry(target_of[i]).or_default().add(w);
    })?;
    let entropy = entropy_of(&prefix);
    let info = entropy + entropy_of(&marginal) - entropy_of(&joint);
    Ok(InfoReport { k, entropy, mutual_information: info.clamp(0.0, entropy.max(0.0)), target: Some(target) })
}

/// Tie-break orders tried by [`verify_information_theorem`]: every order of
/// `H` when `m ≤ 4`, otherwise the 24 orders that keep the first `m − 4`
/// positions in place and permute the last four.
pub fn tie_break_orders(m: usize) -> Vec<RankList> {
    if m <= EXHAUSTIVE_TIE_BREAKS {
        return VertexPermutation::all(m).into_iter().map(|p| RankList { order: p.as_slice().to_vec() }).collect();
    }
    let head = m - EXHAUSTIVE_TIE_BREAKS;
    VertexPermutation::all(EXHAUSTIVE_TIE_BREAKS)
        .into_iter()
        .map(|p| RankList { order: (0..head).chain(p.as_slice().iter().map(|&u| head + u)).collect() })
        .collect()
}

/// What to do when the variant's assumption fails on part of the support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AssumptionPolicy {
    /// Fail with [`Error::AssumptionViolated`].
    #[default]
    Require,
    /// Run anyway and record the violating mass.
    Report,
}

/// Which comparison to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoremVariant {
    /// Feature-aware against feature-oblivious; information about the graphs.
    Features,
    /// Feature-aware against network-oblivious; information about the vertex
    /// features.
    Topology,
}

impl TheoremVariant {
    pub fn other_mode(self) -> Mode {
        match self {
            TheoremVariant::Features => Mode::FeatureOblivious,
            TheoremVariant::Topology => Mode::NetworkOblivious,
        }
    }

    pub fn target(self) -> InfoTarget {
        match self {
            TheoremVariant::Features => InfoTarget::Graphs,
            TheoremVariant::Topology => InfoTarget::VertexFeatures,
        }
    }

    pub fn assumption(self) -> Assumption {
        self.other_mode().assumption()
    }
}

/// The feature-aware scheme under one tie-break order.
#[derive(Clone, Debug, PartialEq)]
pub struct TieBreakOutcome {
    pub tie_break: RankList,
    pub loss: f64,
    pub entropy: f64,
    pub mutual_information: f64,
}

impl TieBreakOutcome {
    pub fn information_equals_entropy(&self) -> bool {
        (self.entropy - self.mutual_information).abs() <= INFO_TOL
    }
}

/// Outcome of comparing losses and informations on one distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoremReport {
    pub variant: TheoremVariant,
    pub k: usize,
    pub loss_fa: f64,
    pub loss_other: f64,
    pub outcomes: Vec<TieBreakOutcome>,
    pub losses_equal: bool,
    pub information_equal_somewhere: bool,
    /// Equal losses exactly when some tie-break attains `I = H`.
    pub holds: bool,
    /// False when only a fixed subset of tie-break orders was tried.
    pub exhaustive_tie_breaks: bool,
    /// Support mass on which the variant's assumption fails.
    pub violation_mass: f64,
}

impl TheoremReport {
    /// `loss_other − loss_fa`.
    pub fn margin(&self) -> f64 {
        self.loss_other - self.loss_fa
    }
}

/// Computes the feature-aware and the comparison Bayes losses at level `k`
/// and, for every tie-break order, the entropy of the feature-aware prefix and
/// its information about the variant's target.
pub fn verify_information_theorem(
    dist: &EnumerableNominatableDistribution,
    k: usize,
    variant: TheoremVariant,
    policy: AssumptionPolicy,
) -> Result<TheoremReport> {
    let assumption = variant.assumption();
    let violations = dist.violations(assumption)?;
    if policy == AssumptionPolicy::Require {
        if let Some(&index) = violations.first() {
            return Err(Error::AssumptionViolated { index, assumption: assumption.name() });
        }
    }
    let violation_mass = kahan_sum(violations.iter().map(|&i| dist.support()[i].p));

    let m = dist.m();
    let fa = Arc::new(class_representatives(dist, Mode::FeatureAware, SymmetryPolicy::Average)?);
    let other = Arc::new(class_representatives(dist, variant.other_mode(), SymmetryPolicy::Average)?);
    let loss_fa = level_k_loss(&SchemeTable::greedy(fa.clone(), RankList::identity(m))?, dist, k)?;
    let loss_other = level_k_loss(&SchemeTable::greedy(other, RankList::identity(m))?, dist, k)?;

    let mut outcomes = Vec::new();
    for tie_break in tie_break_orders(m) {
        let scheme = SchemeTable::greedy(fa.clone(), tie_break.clone())?;
        let loss = level_k_loss(&scheme, dist, k)?;
        let info = rank_mutual_information(&scheme, dist, k, variant.target())?;
        outcomes.push(TieBreakOutcome {
            tie_break,
            loss,
            entropy: info.entropy,
            mutual_information: info.mutual_information,
        });
    }
    let losses_equal = (loss_fa - loss_other).abs() <= INFO_TOL;
    let information_equal_somewhere = outcomes.iter().any(TieBreakOutcome::information_equals_entropy);
    Ok(TheoremReport {
        variant,
        k,
        loss_fa,
        loss_other,
        outcomes,
        losses_equal,
        information_equal_somewhere,
        holds: losses_equal == information_equal_somewhere,
        exhaustive_tie_breaks: m <= EXHAUSTIVE_TIE_BREAKS,
        violation_mass,
    })
}
