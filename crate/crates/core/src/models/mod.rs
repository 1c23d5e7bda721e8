//! Generative models: stochastic blockmodels with Gaussian vertex features,
//! and finite nominatable distributions over featured graph pairs.

mod bundled;
mod connectome;
mod enumerable;

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::spectral::WeightedAdjacency;

pub use connectome::{
    one_hot, synthetic_connectome, ConnectomePair, CONNECTOME_ORDER, NEURON_TYPES, TYPE_SIZES,
};
pub use bundled::{bundled_instance, example_4_1_distribution, BundledInstance, BUNDLED_INSTANCES};
pub use enumerable::{
    enumerate_distribution, Assumption, Categorical, EdgeModel, EnumerableNominatableDistribution,
    FeatureModel, NominatablePairSpec, SupportPoint, ViolationPolicy, DEFAULT_SUPPORT_CAP,
};

fn check_probability(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { what, value })
    }
}

/// Stochastic blockmodel parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SbmParams {
    block_of: Vec<usize>,
    lambda: DMatrix<f64>,
}

impl SbmParams {
    pub fn new(block_of: Vec<usize>, lambda: DMatrix<f64>) -> Result<Self> {
        let k = lambda.nrows();
        if lambda.ncols() != k || k == 0 {
            return Err(Error::InvalidDimension("block matrix must be square and nonempty"));
        }
        for i in 0..k {
            for j in 0..k {
                check_probability("block probability", lambda[(i, j)])?;
                if lambda[(i, j)] != lambda[(j, i)] {
                    return Err(Error::NotSymmetric(libm::fabs(lambda[(i, j)] - lambda[(j, i)])));
                }
            }
        }
        if let Some(&b) = block_of.iter().find(|&&b| b >= k) {
            return Err(Error::InvalidParameter(format!("block {b} out of range for {k} blocks")));
        }
        if block_of.is_empty() {
            return Err(Error::Empty("block assignment"));
        }
        Ok(Self { block_of, lambda })
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> usize {
        self.lambda.nrows()
    }

    pub fn block_of(&self) -> &[usize] {
        &self.block_of
    }

    pub fn lambda(&self) -> &DMatrix<f64> {
        &self.lambda
    }

    /// Edge probability between `u` and `v`.
    pub fn edge_probability(&self, u: usize, v: usize) -> f64 {
        self.lambda[(self.block_of[u], self.block_of[v])]
    }
}

/// Samples a hollow 0/1 adjacency with independent Bernoulli edges.
pub fn sample_sbm<R: Rng + ?Sized>(params: &SbmParams, rng: &mut R) -> WeightedAdjacency {
    let n = params.n();
    let mut a = DMatrix::zeros(n, n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(params.edge_probability(u, v)) {
                a[(u, v)] = 1.0;
                a[(v, u)] = 1.0;
            }
        }
    }
    WeightedAdjacency::new(a).expect("sampled adjacency is symmetric and nonnegative")
}

/// Number of blocks in the simulation model.
pub const SIM_BLOCKS: usize = 5;
/// Default simulation graph order.
pub const SIM_ORDER: usize = 250;
/// Vertex feature dimension in the simulation model.
pub const SIM_FEATURE_DIM: usize = 5;

/// Block matrices of the simulation model:
/// `Λ₁ = diag(ε+0.05, ε, ε, ε, ε) + 0.3·J` and `Λ₂ = 0.8·Λ₁ + 0.2·J`.
pub fn sim_lambdas(eps: f64) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if !(0.0..=0.65).contains(&eps) {
        return Err(Error::InvalidParameter(format!("epsilon {eps} outside [0, 0.65]")));
    }
    let k = SIM_BLOCKS;
    let l1 = DMatrix::from_fn(k, k, |i, j| {
        let diag = if i == j { eps + if i == 0 { 0.05 } else { 0.0 } } else { 0.0 };
        diag + 0.3
    });
    let l2 = l1.map(|v| 0.8 * v + 0.2);
    Ok((l1, l2))
}

/// Block of vertex `v` (0-based) when `n` vertices are split into equal blocks.
pub fn sim_block(v: usize, n: usize) -> usize {
    v / (n / SIM_BLOCKS)
}

/// One draw of the simulation model.
#[derive(Clone, Debug)]
pub struct SimPair {
    pub g1: WeightedAdjacency,
    pub x: DMatrix<f64>,
    pub g2: WeightedAdjacency,
    pub y: DMatrix<f64>,
    /// Block of each vertex; block 0 holds the vertices of interest.
    pub blocks: Vec<usize>,
}

/// Two independent 5-block SBMs with equal blocks and Gaussian features:
/// block-0 vertices draw `N(δ·1, I₅)`, the rest `N(0, I₅)`.
pub fn sample_sim_pair<R: Rng + ?Sized>(eps: f64, delta: f64, n_total: usize, rng: &mut R) -> Result<SimPair> {
    if n_total == 0 || !n_total.is_multiple_of(SIM_BLOCKS) {
        return Err(Error::InvalidParameter(format!("order {n_total} is not a positive multiple of {SIM_BLOCKS}")));
    }
    if !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("delta {delta} is not finite")));
    }
    let (l1, l2) = sim_lambdas(eps)?;
    let blocks: Vec<usize> = (0..n_total).map(|v| sim_block(v, n_total)).collect();
    let p1 = SbmParams::new(blocks.clone(), l1)?;
    let p2 = SbmParams::new(blocks.clone(), l2)?;
    let g1 = sample_sbm(&p1, rng);
    let x = sample_features(&blocks, delta, rng);
    let g2 = sample_sbm(&p2, rng);
    let y = sample_features(&blocks, delta, rng);
    Ok(SimPair { g1, x, g2, y, blocks })
}

fn sample_features<R: Rng + ?Sized>(blocks: &[usize], delta: f64, rng: &mut R) -> DMatrix<f64> {
    let mut f = DMatrix::zeros(blocks.len(), SIM_FEATURE_DIM);
    for (v, &b) in blocks.iter().enumerate() {
        let mean = if b == 0 { delta } else { 0.0 };
        for c in 0..SIM_FEATURE_DIM {
            let z: f64 = rng.sample(StandardNormal);
            f[(v, c)] = mean + z;
        }
    }
    f
}
