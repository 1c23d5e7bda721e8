//! Small enumerable instances shipped with the library.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::enumerable::{
    enumerate_distribution, pair_probabilities, Assumption, Categorical, EdgeModel,
    EnumerableNominatableDistribution, FeatureModel, NominatablePairSpec,
};
use super::SbmParams;
use crate::error::{Error, Result};
use crate::featured_graph::{pair_count, pair_index, Symbol, VertexPermutation};

/// Two independent two-block SBM graphs on `2·n_half` vertices with
/// `Λ = [[a, b], [b, c]]`, the first `n_half` vertices in block one, and the
/// deterministic feature vector `[1…1, 2…2, 1…1]` (quarters) on both graphs.
/// The vertex of interest is vertex 0.
pub fn example_4_1_distribution(n_half: usize, a: f64, b: f64, c: f64) -> Result<EnumerableNominatableDistribution> {
    if !(b < a && a < c) {
        return Err(Error::InvalidParameter(format!("need b < a < c, got a={a}, b={b}, c={c}")));
    }
    if n_half == 0 || !n_half.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("n_half = {n_half} must be positive and even")));
    }
    if 2 * n_half > 4 {
        return Err(Error::InvalidParameter(format!("2·n_half = {} is too large to enumerate", 2 * n_half)));
    }
    let n = 2 * n_half;
    let blocks: Vec<usize> = (0..n).map(|v| usize::from(v >= n_half)).collect();
    let lambda = DMatrix::from_row_slice(2, 2, &[a, b, b, c]);
    let params = SbmParams::new(blocks, lambda)?;
    let q = n_half / 2;
    let labels: Vec<u32> = (0..n).map(|v| if v < q || v >= q + n_half { 1 } else { 2 }).collect();
    let spec = NominatablePairSpec::new(
        n,
        n,
        n,
        EdgeModel::sbm(&params, &params),
        FeatureModel::fixed(&labels, &labels),
        vec![0],
    );
    enumerate_distribution(&spec)
}

/// The bundled oracle instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BundledInstance {
    /// Six vertices, constant features; the second graph is the first
    /// (a fixed asymmetric graph) with independent edge flips. Graph-symmetric
    /// draws are dropped.
    ConstFeatures,
    /// The two-block blockmodel pair on four vertices with `a = 0.4`,
    /// `b = 0.1`, `c = 0.7`.
    Example41Small,
    /// Four vertices, both graphs empty; distinct first-graph features and
    /// second-graph features that are a Mallows-distributed shuffle of them.
    EmptyGraph,
    /// Four vertices, distinct first-graph features, uniformly shuffled
    /// second-graph features, and a second graph that copies the first with
    /// independent edge flips.
    GraphSignal,
    /// Four vertices, two feature symbols copied with noise, blockmodel
    /// edges copied with flips; f-symmetric draws are dropped.
    Mixed4,
}

/// All bundled instances.
pub const BUNDLED_INSTANCES: [BundledInstance; 5] = [
    BundledInstance::ConstFeatures,
    BundledInstance::Example41Small,
    BundledInstance::EmptyGraph,
    BundledInstance::GraphSignal,
    BundledInstance::Mixed4,
];

/// Looks a bundled instance up by name.
pub fn bundled_instance(name: &str) -> Option<BundledInstance> {
    BUNDLED_INSTANCES.iter().copied().find(|b| b.name() == name)
}

/// A fixed graph on six vertices whose only automorphism is the identity.
const ASYMMETRIC_SIX: [(usize, usize); 6] = [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 5)];

impl BundledInstance {
    pub fn name(self) -> &'static str {
        match self {
            BundledInstance::ConstFeatures => "const-features",
            BundledInstance::Example41Small => "example-4-1-small",
            BundledInstance::EmptyGraph => "empty-graph",
            BundledInstance::GraphSignal => "graph-signal",
            BundledInstance::Mixed4 => "mixed-4",
        }
    }

    pub fn build(self) -> Result<EnumerableNominatableDistribution> {
        match self {
            BundledInstance::ConstFeatures => const_features(),
            BundledInstance::Example41Small => example_4_1_distribution(2, 0.4, 0.1, 0.7),
            BundledInstance::EmptyGraph => empty_graph(),
            BundledInstance::GraphSignal => graph_signal(),
            BundledInstance::Mixed4 => mixed_4(),
        }
    }
}

fn const_features() -> Result<EnumerableNominatableDistribution> {
    let n = 6;
    let mut g1 = vec![0.0; pair_count(n)];
    for &(u, v) in &ASYMMETRIC_SIX {
        g1[pair_index(n, u, v)] = 1.0;
    }
    let edges = EdgeModel { g1, g2: vec![0.5; pair_count(n)], core_flip: Some(0.1), edge_features: None };
    let spec = NominatablePairSpec::new(n, n, n, edges, FeatureModel::fixed(&[0; 6], &[0; 6]), vec![0])
        .require(Assumption::GraphAsymmetry)
        .require(Assumption::FeatureAsymmetry);
    enumerate_distribution(&spec)
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len()).map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count()).sum()
}

fn empty_graph() -> Result<EnumerableNominatableDistribution> {
    let n = 4;
    let x: Vec<Symbol> = (0..n as u32).map(Symbol).collect();
    let perms = VertexPermutation::all(n);
    let weights: Vec<f64> = perms.iter().map(|p| libm::pow(0.5, inversions(p.as_slice()) as f64)).collect();
    let total: f64 = weights.iter().sum();
    let table = perms
        .iter()
        .zip(&weights)
        .map(|(p, w)| {
            let mut y = vec![Symbol(0); n];
            for v in 0..n {
                y[p.apply(v)] = x[v];
            }
            (x.clone(), y, w / total)
        })
        .collect();
    let spec = NominatablePairSpec::new(
        n,
        n,
        n,
        EdgeModel::empty(n, n),
        FeatureModel::Joint { d1: 1, d2: 1, table },
        vec![0],
    )
    .require(Assumption::DistinctRows)
    .require(Assumption::FeatureAsymmetry);
    enumerate_distribution(&spec)
}

fn graph_signal() -> Result<EnumerableNominatableDistribution> {
    let n = 4;
    let edges = EdgeModel { g1: vec![0.5; pair_count(n)], g2: vec![0.5; pair_count(n)], core_flip: Some(0.1), edge_features: None };
    let features = FeatureModel::Product {
        x: (0..n as u32).map(|s| Categorical::point(vec![Symbol(s)])).collect(),
        y: (0..n).map(|_| Categorical::uniform_symbols(&[0, 1, 2, 3])).collect(),
        core_noise: None,
    };
    let spec = NominatablePairSpec::new(n, n, n, edges, features, vec![0])
        .require(Assumption::DistinctRows)
        .require(Assumption::FeatureAsymmetry);
    enumerate_distribution(&spec)
}

fn mixed_4() -> Result<EnumerableNominatableDistribution> {
    let n = 4;
    let params = SbmParams::new(vec![0, 0, 1, 1], DMatrix::from_row_slice(2, 2, &[0.7, 0.2, 0.2, 0.5]))?;
    let probs = pair_probabilities(&params);
    let edges = EdgeModel { g1: probs.clone(), g2: probs, core_flip: Some(0.2), edge_features: None };
    let x = [0u32, 1, 0, 1];
    let features = FeatureModel::Product {
        x: x.iter().map(|&s| Categorical::point(vec![Symbol(s)])).collect(),
        y: (0..n).map(|_| Categorical::uniform_symbols(&[0, 1])).collect(),
        core_noise: Some(0.3),
    };
    let spec = NominatablePairSpec::new(n, n, n, edges, features, vec![0]).require(Assumption::FeatureAsymmetry);
    enumerate_distribution(&spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::featured_graph::{is_f_asymmetric, FeaturedGraph};

    #[test]
    fn example_4_1_shape() {
        let d = example_4_1_distribution(2, 0.4, 0.1, 0.7).unwrap();
        assert_eq!(d.support().len(), 4096);
        let labels: Vec<Symbol> = [1, 2, 2, 1].iter().map(|&s| Symbol(s)).collect();
        assert!(d.support().iter().all(|s| s.g1.vertex_features() == labels.as_slice()));
        assert_eq!(d.interest(), &[0]);
        assert!(example_4_1_distribution(2, 0.1, 0.4, 0.7).is_err());
        assert!(example_4_1_distribution(3, 0.4, 0.1, 0.7).is_err());
        assert!(example_4_1_distribution(4, 0.4, 0.1, 0.7).is_err());
    }

    #[test]
    fn fixed_six_vertex_graph_is_asymmetric() {
        assert!(is_f_asymmetric(&FeaturedGraph::plain(6, &ASYMMETRIC_SIX).unwrap()).unwrap());
    }

    #[test]
    fn names_round_trip() {
        for b in BUNDLED_INSTANCES {
            assert_eq!(bundled_instance(b.name()), Some(b));
        }
        assert_eq!(bundled_instance("nope"), None);
    }
}
