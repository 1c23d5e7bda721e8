//! Richly featured graphs: an undirected graph on `0..n` with a discrete
//! vertex-feature matrix and an edge-feature matrix whose rows are all-`None`
//! exactly on non-edges.
//!
//! Edge rows are indexed by unordered pairs `{u, v}` with `u < v` in
//! lexicographic order, see [`pair_index`].

mod obfuscation;
mod permutation;
mod search;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub use obfuscation::{obfuscate, HLabel, ObfuscatedGraph, Obfuscation};
pub use permutation::VertexPermutation;
pub use search::{
    all_f_isomorphisms, canonical_labeling, f_automorphisms, f_isomorphism, is_f_asymmetric, orbit,
    orbits,
    SEARCH_LIMIT,
};

/// An interned feature symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Symbol(pub u32);

/// Number of unordered vertex pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic row index of the pair `{u, v}`, `u != v`.
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (i, j) = if u < v { (u, v) } else { (v, u) };
    debug_assert!(j < n && i != j);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_at(n: usize, mut index: usize) -> (usize, usize) {
    for i in 0..n {
        let row = n - i - 1;
        if index < row {
            return (i, i + 1 + index);
        }
        index -= row;
    }
    panic!("pair index out of range");
}

/// The graph compatible with an edge-feature matrix: every pair whose row is
/// present. Rows mixing present and missing entries are rejected.
pub fn gamma(n: usize, d2: usize, edge_features: &[Option<Symbol>]) -> Result<Vec<(usize, usize)>> {
    if d2 == 0 {
        return Err(Error::InvalidDimension("edge feature width must be at least 1"));
    }
    let rows = pair_count(n);
    if edge_features.len() != rows * d2 {
        return Err(Error::SizeMismatch {
            what: "edge feature matrix",
            expected: rows * d2,
            found: edge_features.len(),
        });
    }
    let mut edges = Vec::new();
    for (row, cells) in edge_features.chunks(d2).enumerate() {
        let present = cells.iter().filter(|c| c.is_some()).count();
        if present == d2 {
            edges.push(pair_at(n, row));
        } else if present != 0 {
            return Err(Error::MixedEdgeRow { row });
        }
    }
    Ok(edges)
}

/// Which part of a featured graph a symmetry or a scheme is allowed to see.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum View {
    /// Graph and all features (f-automorphisms, orbits `I(u; g)`).
    Featured,
    /// Graph only (plain automorphisms, orbits `J(u; g)`).
    Topology,
    /// Vertex features only (row symmetries, orbits `Y(u; g)`).
    VertexFeatures,
}

impl View {
    /// Projects `g` onto the information visible in this view.
    pub fn project(self, g: &FeaturedGraph) -> FeaturedGraph {
        match self {
            View::Featured => g.clone(),
            View::Topology => g.topology(),
            View::VertexFeatures => g.vertex_features_only(),
        }
    }
}

/// A richly featured network on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeaturedGraph {
    n: usize,
    d1: usize,
    d2: usize,
    x: Vec<Symbol>,
    w: Vec<Option<Symbol>>,
}

impl FeaturedGraph {
    /// Builds a graph from row-major feature matrices, validating all invariants.
    pub fn new(
        n: usize,
        d1: usize,
        d2: usize,
        vertex_features: Vec<Symbol>,
        edge_features: Vec<Option<Symbol>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension("vertex count must be positive"));
        }
        if d1 == 0 {
            return Err(Error::InvalidDimension("vertex feature width must be at least 1"));
        }
        if vertex_features.len() != n * d1 {
            return Err(Error::SizeMismatch {
                what: "vertex feature matrix",
                expected: n * d1,
                found: vertex_features.len(),
            });
        }
        gamma(n, d2, &edge_features)?;
        Ok(Self { n, d1, d2, x: vertex_features, w: edge_features })
    }

    /// Edgeless graph with the given vertex features and edge-feature width.
    pub fn edgeless(n: usize, d1: usize, d2: usize, vertex_features: Vec<Symbol>) -> Result<Self> {
        Self::new(n, d1, d2, vertex_features, vec![None; pair_count(n) * d2])
    }

    /// Plain graph: constant vertex features and a constant edge feature.
    pub fn plain(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::edgeless(n, 1, 1, vec![Symbol(0); n])?;
        for &(u, v) in edges {
            g.set_edge(u, v, Some(&[Symbol(0)]))?;
        }
        Ok(g)
    }

    /// Graph with one vertex-feature symbol per vertex and a constant edge feature.
    pub fn with_labels(labels: &[u32], edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let x = labels.iter().map(|&s| Symbol(s)).collect();
        let mut g = Self::edgeless(n, 1, 1, x)?;
        for &(u, v) in edges {
            g.set_edge(u, v, Some(&[Symbol(0)]))?;
        }
        Ok(g)
    }

    /// Sets (`Some(row)`) or clears (`None`) the edge `{u, v}`.
    pub fn set_edge(&mut self, u: usize, v: usize, row: Option<&[Symbol]>) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidParameter(alloc::format!("self-loop at vertex {u}")));
        }
        let start = pair_index(self.n, u, v) * self.d2;
        let cells = &mut self.w[start..start + self.d2];
        match row {
            Some(r) => {
                if r.len() != self.d2 {
                    return Err(Error::SizeMismatch {
                        what: "edge feature row",
                        expected: self.d2,
                        found: r.len(),
                    });
                }
                for (c, &s) in cells.iter_mut().zip(r) {
                    *c = Some(s);
                }
            }
            None => cells.iter_mut().for_each(|c| *c = None),
        }
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, order: self.n })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn vertex_features(&self) -> &[Symbol] {
        &self.x
    }

    pub fn edge_features(&self) -> &[Option<Symbol>] {
        &self.w
    }

    pub fn vertex_row(&self, v: usize) -> &[Symbol] {
        &self.x[v * self.d1..(v + 1) * self.d1]
    }

    pub fn edge_row(&self, u: usize, v: usize) -> &[Option<Symbol>] {
        let start = pair_index(self.n, u, v) * self.d2;
        &self.w[start..start + self.d2]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.w[pair_index(self.n, u, v) * self.d2].is_some()
    }

    /// Edge list in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..pair_count(self.n))
            .filter(|&e| self.w[e * self.d2].is_some())
            .map(|e| pair_at(self.n, e))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..pair_count(self.n)).filter(|&e| self.w[e * self.d2].is_some()).count()
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.has_edge(u, v)).count()
    }

    /// True when no two vertices share a vertex-feature row.
    pub fn has_distinct_vertex_rows(&self) -> bool {
        let mut rows: Vec<&[Symbol]> = (0..self.n).map(|v| self.vertex_row(v)).collect();
        rows.sort_unstable();
        rows.windows(2).all(|p| p[0] != p[1])
    }

    /// Relabels vertices by `sigma`: vertex `v` becomes `sigma(v)`.
    pub fn apply_permutation(&self, sigma: &VertexPermutation) -> Result<Self> {
        if sigma.len() != self.n {
            return Err(Error::SizeMismatch {
                what: "permutation",
                expected: self.n,
                found: sigma.len(),
            });
        }
        Ok(self.relabel(sigma.as_slice()))
    }

    /// Relabeling without a size check; `image[v]` is the new label of `v`.
    pub(crate) fn relabel(&self, image: &[usize]) -> Self {
        let (n, d1, d2) = (self.n, self.d1, self.d2);
        let mut x = vec![Symbol(0); n * d1];
        for (v, &t) in image.iter().enumerate().take(n) {
            x[t * d1..(t + 1) * d1].copy_from_slice(self.vertex_row(v));
        }
        let mut w = vec![None; self.w.len()];
        for e in 0..pair_count(n) {
            let row = &self.w[e * d2..(e + 1) * d2];
            if row[0].is_none() {
                continue;
            }
            let (u, v) = pair_at(n, e);
            let t = pair_index(n, image[u], image[v]) * d2;
            w[t..t + d2].copy_from_slice(row);
        }
        Self { n, d1, d2, x, w }
    }

    /// The underlying graph with constant vertex and edge features.
    pub fn topology(&self) -> Self {
        let w = (0..pair_count(self.n))
            .map(|e| self.w[e * self.d2].map(|_| Symbol(0)))
            .collect();
        Self { n: self.n, d1: 1, d2: 1, x: vec![Symbol(0); self.n], w }
    }

    /// The vertex features on an edgeless graph.
    pub fn vertex_features_only(&self) -> Self {
        Self {
            n: self.n,
            d1: self.d1,
            d2: 1,
            x: self.x.clone(),
            w: vec![None; pair_count(self.n)],
        }
    }

    /// Edge presence bitmap in pair order.
    pub fn adjacency_bits(&self) -> Vec<bool> {
        (0..pair_count(self.n)).map(|e| self.w[e * self.d2].is_some()).collect()
    }
}

/// Relabels `g` by `sigma`.
pub fn apply_permutation(g: &FeaturedGraph, sigma: &VertexPermutation) -> Result<FeaturedGraph> {
    g.apply_permutation(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: u32) -> Symbol {
        Symbol(v)
    }

    #[test]
    fn pair_index_round_trip() {
        for n in 2..9 {
            for e in 0..pair_count(n) {
                let (u, v) = pair_at(n, e);
                assert!(u < v && v < n);
                assert_eq!(pair_index(n, u, v), e);
                assert_eq!(pair_index(n, v, u), e);
            }
        }
    }

    #[test]
    fn gamma_example_edges() {
        // Pairs {1,2},{1,3},{1,4},{3,4} in 1-based labels.
        let n = 4;
        let mut w = vec![None; pair_count(n)];
        for (u, v) in [(0, 1), (0, 2), (0, 3), (2, 3)] {
            w[pair_index(n, u, v)] = Some(s(1));
        }
        assert_eq!(gamma(n, 1, &w).unwrap(), vec![(0, 1), (0, 2), (0, 3), (2, 3)]);
        assert!(gamma(n, 1, &[None; 6]).unwrap().is_empty());
    }

    #[test]
    fn gamma_rejects_mixed_rows() {
        let mut w = vec![None; 2 * pair_count(3)];
        w[2] = Some(s(0));
        assert_eq!(gamma(3, 2, &w), Err(Error::MixedEdgeRow { row: 1 }));
        assert!(FeaturedGraph::new(3, 1, 2, vec![s(0); 3], w).is_err());
    }

    #[test]
    fn triangle_with_pendant_transposition() {
        // Triangle 0-1-2 with pendant 3 on vertex 2.
        let mut g = FeaturedGraph::edgeless(4, 1, 1, vec![s(10), s(11), s(12), s(13)]).unwrap();
        g.set_edge(0, 1, Some(&[s(1)])).unwrap();
        g.set_edge(0, 2, Some(&[s(2)])).unwrap();
        g.set_edge(1, 2, Some(&[s(3)])).unwrap();
        g.set_edge(2, 3, Some(&[s(4)])).unwrap();
        let sigma = VertexPermutation::transposition(4, 1, 2);
        let h = apply_permutation(&g, &sigma).unwrap();
        assert_eq!(h.vertex_features(), &[s(10), s(12), s(11), s(13)]);
        // Rows in pair order 01,02,03,12,13,23.
        assert_eq!(
            h.edge_features(),
            &[Some(s(2)), Some(s(1)), None, Some(s(3)), Some(s(4)), None]
        );
        assert_eq!(h.apply_permutation(&sigma.inverse()).unwrap(), g);
    }

    #[test]
    fn identity_permutation_is_noop() {
        let g = FeaturedGraph::plain(5, &[(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.apply_permutation(&VertexPermutation::identity(5)).unwrap(), g);
    }

    #[test]
    fn permutation_size_mismatch() {
        let g = FeaturedGraph::plain(3, &[]).unwrap();
        assert!(matches!(
            g.apply_permutation(&VertexPermutation::identity(4)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn projections() {
        let mut g = FeaturedGraph::edgeless(3, 1, 2, vec![s(1), s(2), s(3)]).unwrap();
        g.set_edge(0, 2, Some(&[s(5), s(6)])).unwrap();
        let t = View::Topology.project(&g);
        assert_eq!(t, FeaturedGraph::plain(3, &[(0, 2)]).unwrap());
        let y = View::VertexFeatures.project(&g);
        assert_eq!(y.edge_count(), 0);
        assert_eq!(y.vertex_features(), g.vertex_features());
        assert!(g.has_distinct_vertex_rows());
    }
}
