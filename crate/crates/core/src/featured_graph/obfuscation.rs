use alloc::vec::Vec;

use super::{FeaturedGraph, VertexPermutation};
use crate::error::{Error, Result};

/// A label in the obfuscated set `H`. Distinct from vertex indices by type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HLabel(pub u32);

/// A bijection from the vertices of the second graph onto `H`.
///
/// `H` is ordered by insertion: position `p` holds `labels()[p]`, and this
/// order is the one used for tie-breaking and for edge-row indexing of
/// obfuscated graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obfuscation {
    labels: Vec<HLabel>,
    position: Vec<usize>,
}

impl Obfuscation {
    /// `position[v]` is the position in `labels` that vertex `v` is sent to.
    pub fn new(labels: Vec<HLabel>, position: Vec<usize>) -> Result<Self> {
        if labels.len() != position.len() {
            return Err(Error::SizeMismatch {
                what: "obfuscation labels",
                expected: position.len(),
                found: labels.len(),
            });
        }
        VertexPermutation::new(position.clone())?;
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::InvalidParameter("duplicate obfuscated label".into()));
        }
        Ok(Self { labels, position })
    }

    /// Labels `0..m` with vertex `v` sent to position `sigma(v)`.
    pub fn from_permutation(sigma: &VertexPermutation) -> Self {
        Self {
            labels: (0..sigma.len() as u32).map(HLabel).collect(),
            position: sigma.as_slice().to_vec(),
        }
    }

    pub fn identity(m: usize) -> Self {
        Self::from_permutation(&VertexPermutation::identity(m))
    }

    pub fn m(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[HLabel] {
        &self.labels
    }

    pub fn position_of(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn label_of(&self, v: usize) -> HLabel {
        self.labels[self.position[v]]
    }

    /// The vertex sent to position `p`.
    pub fn vertex_at(&self, p: usize) -> usize {
        self.position.iter().position(|&q| q == p).expect("position in range")
    }

    /// The vertex-to-position map as a permutation.
    pub fn as_permutation(&self) -> VertexPermutation {
        VertexPermutation::from_vec_unchecked(self.position.clone())
    }

    /// Position map `to ∘ from⁻¹`, carrying `from(g)` onto `to(g)`.
    pub fn transfer(from: &Self, to: &Self) -> Result<VertexPermutation> {
        if from.m() != to.m() {
            return Err(Error::SizeMismatch {
                what: "obfuscation",
                expected: from.m(),
                found: to.m(),
            });
        }
        Ok(to.as_permutation().compose(&from.as_permutation().inverse()))
    }
}

/// A featured graph whose vertex `p` is the label at position `p` of `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObfuscatedGraph {
    pub labels: Vec<HLabel>,
    pub graph: FeaturedGraph,
}

/// Relabels the vertices of `g` by `o`.
pub fn obfuscate(g: &FeaturedGraph, o: &Obfuscation) -> Result<ObfuscatedGraph> {
    if o.m() != g.n() {
        return Err(Error::SizeMismatch {
            what: "obfuscation domain",
            expected: g.n(),
            found: o.m(),
        });
    }
    Ok(ObfuscatedGraph { labels: o.labels.clone(), graph: g.relabel(&o.position) })
}
