use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::Mode;
use crate::error::{Error, Result};
use crate::featured_graph::{
    canonical_labeling, f_automorphisms, is_f_asymmetric, obfuscate, FeaturedGraph, VertexPermutation,
};
use crate::models::EnumerableNominatableDistribution;
use crate::sum::KahanSum;

/// How classes whose representative has nontrivial symmetries are handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SymmetryPolicy {
    /// Fail on the first support pair with a nontrivial symmetry in the view.
    Strict,
    /// Lift rankings uniformly over all isomorphisms from the representative.
    #[default]
    Average,
}

/// A support entry placed in a class, with one isomorphism from the class
/// representative's observation onto its own.
#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub point: usize,
    pub lift: VertexPermutation,
}

/// An equivalence class of observations: equal first graph (as seen by the
/// mode) and isomorphic obfuscated second graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Class {
    first: FeaturedGraph,
    observed: FeaturedGraph,
    labeling: VertexPermutation,
    automorphisms: Vec<VertexPermutation>,
    members: Vec<Member>,
    mass: f64,
    posterior: Vec<f64>,
}

impl Class {
    /// The first graph as seen by the mode.
    pub fn first(&self) -> &FeaturedGraph {
        &self.first
    }

    /// The representative obfuscated second graph as seen by the mode.
    pub fn observed(&self) -> &FeaturedGraph {
        &self.observed
    }

    /// Symmetries of [`Class::observed`]; a single identity when asymmetric.
    pub fn automorphisms(&self) -> &[VertexPermutation] {
        &self.automorphisms
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Posterior probability that each position of the representative is an
    /// obfuscated vertex of interest.
    pub fn posterior(&self) -> &[f64] {
        &self.posterior
    }

    /// Lifts a representative-frame position list into the frame of a member
    /// via `lift ∘ a`.
    pub(crate) fn lifted(lift: &VertexPermutation, a: &VertexPermutation, positions: &[usize]) -> Vec<usize> {
        positions.iter().map(|&u| lift.apply(a.apply(u))).collect()
    }
}

/// The class decomposition of a distribution's support for one mode.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    mode: Mode,
    policy: SymmetryPolicy,
    m: usize,
    interest: Vec<usize>,
    classes: Vec<Class>,
    class_of: Vec<usize>,
    index: BTreeMap<(FeaturedGraph, FeaturedGraph), usize>,
}

impl Partition {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn policy(&self) -> SymmetryPolicy {
        self.policy
    }

    /// Order of the obfuscated graph.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Positions of the obfuscated vertices of interest.
    pub fn interest(&self) -> &[usize] {
        &self.interest
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    /// Class index of each support entry.
    pub fn class_of(&self) -> &[usize] {
        &self.class_of
    }

    /// Number of classes whose representative has a nontrivial symmetry.
    pub fn symmetric_classes(&self) -> usize {
        self.classes.iter().filter(|c| c.automorphisms.len() > 1).count()
    }

    /// Finds the class of an observation and one isomorphism from the class
    /// representative onto the observation.
    pub fn locate(&self, g1: &FeaturedGraph, observed: &FeaturedGraph) -> Result<(usize, VertexPermutation)> {
        let view = self.mode.view();
        let first = view.project(g1);
        let obs = view.project(observed);
        if obs.n() != self.m {
            return Err(Error::SizeMismatch { what: "observed graph", expected: self.m, found: obs.n() });
        }
        let (canon, labeling) = canonical_labeling(&obs)?;
        let &c = self.index.get(&(first, canon)).ok_or(Error::UnknownObservation)?;
        let lift = labeling.inverse().compose(&self.classes[c].labeling);
        Ok((c, lift))
    }
}

/// Partitions the support by (first graph, isomorphism class of the
/// obfuscated second graph), both as seen by `mode`, and computes each
/// class's mass and posterior interest masses.
pub fn class_representatives(
    dist: &EnumerableNominatableDistribution,
    mode: Mode,
    policy: SymmetryPolicy,
) -> Result<Partition> {
    let view = mode.view();
    let o = dist.obfuscation();
    let m = dist.m();
    let mut canon_memo: BTreeMap<FeaturedGraph, (FeaturedGraph, VertexPermutation)> = BTreeMap::new();
    let mut asym_memo: BTreeMap<FeaturedGraph, bool> = BTreeMap::new();
    let mut index: BTreeMap<(FeaturedGraph, FeaturedGraph), usize> = BTreeMap::new();
    let mut classes: Vec<Class> = Vec::new();
    let mut class_of = Vec::with_capacity(dist.support().len());

    for (i, point) in dist.support().iter().enumerate() {
        let first = view.project(&point.g1);
        let obs = view.project(&obfuscate(&point.g2, o)?.graph);
        if policy == SymmetryPolicy::Strict {
            for g in [&first, &obs] {
                let asym = match asym_memo.get(g) {
                    Some(&b) => b,
                    None => {
                        let b = is_f_asymmetric(g)?;
                        asym_memo.insert(g.clone(), b);
                        b
                    }
                };
                if !asym {
                    return Err(Error::AssumptionViolated { index: i, assumption: mode.assumption().name() });
                }
            }
        }
        let (canon, labeling) = match canon_memo.get(&obs) {
            Some(hit) => hit.clone(),
            None => {
                let hit = canonical_labeling(&obs)?;
                canon_memo.insert(obs.clone(), hit.clone());
                hit
            }
        };
        let key = (first, canon);
        match index.get(&key) {
            Some(&c) => {
                let lift = labeling.inverse().compose(&classes[c].labeling);
                classes[c].members.push(Member { point: i, lift });
                class_of.push(c);
            }
            None => {
                let automorphisms = f_automorphisms(&obs)?;
                let c = classes.len();
                classes.push(Class {
                    first: key.0.clone(),
                    observed: obs,
                    labeling,
                    automorphisms,
                    members: vec![Member { point: i, lift: VertexPermutation::identity(m) }],
                    mass: 0.0,
                    posterior: Vec::new(),
                });
                index.insert(key, c);
                class_of.push(c);
            }
        }
    }

    let interest = dist.interest_positions();
    for class in &mut classes {
        let mut mass = KahanSum::new();
        let mut post = vec![KahanSum::new(); m];
        let share = 1.0 / class.automorphisms.len() as f64;
        for member in &class.members {
            let p = dist.support()[member.point].p;
            mass.add(p);
            for a in &class.automorphisms {
                let inv = member.lift.compose(a).inverse();
                for &t in &interest {
                    post[inv.apply(t)].add(p * share);
                }
            }
        }
        class.mass = mass.value();
        class.posterior = post
            .iter()
            .map(|s| if class.mass > 0.0 { s.value() / class.mass } else { 0.0 })
            .collect();
    }

    Ok(Partition { mode, policy, m, interest, classes, class_of, index })
}

/// Posterior probability that position `u` of the class representative is an
/// obfuscated vertex of interest.
pub fn posterior_interest_mass(partition: &Partition, class: usize, u: usize) -> Result<f64> {
    let c = partition.classes.get(class).ok_or(Error::UnknownObservation)?;
    if u >= partition.m {
        return Err(Error::VertexOutOfRange { vertex: u, order: partition.m });
    }
    if c.mass <= 0.0 {
        return Err(Error::ZeroMass);
    }
    Ok(c.posterior[u])
}
