//! A synthetic stand-in for a pair of connectomes on shared neurons.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::spectral::WeightedAdjacency;

/// Vertex count of the synthetic pair.
pub const CONNECTOME_ORDER: usize = 253;
/// Number of neuron types.
pub const NEURON_TYPES: usize = 3;
/// Vertices per type: sensory, motor, inter.
pub const TYPE_SIZES: [usize; NEURON_TYPES] = [80, 98, 75];

const LATENT_DIM: usize = 3;
const TYPE_MEANS: [[f64; LATENT_DIM]; NEURON_TYPES] = [[0.55, 0.15, 0.15], [0.2, 0.5, 0.15], [0.2, 0.2, 0.55]];
const LATENT_NOISE: f64 = 0.15;
const LATENT_FLOOR: f64 = 0.02;
/// Edge probability scale of the second graph relative to the first.
const SECOND_DENSITY: f64 = 0.8;

/// Two weighted graphs on the same neurons, the second with its vertices
/// relabeled.
#[derive(Clone, Debug)]
pub struct ConnectomePair {
    pub first: WeightedAdjacency,
    pub second: WeightedAdjacency,
    /// Type of each vertex of the first graph.
    pub first_types: Vec<usize>,
    /// Type of each vertex of the second graph.
    pub second_types: Vec<usize>,
    /// `matching[v]` is the vertex of the second graph matching `v`.
    pub matching: Vec<usize>,
}

impl ConnectomePair {
    pub fn n(&self) -> usize {
        self.first.n()
    }
}

/// One-hot encoding of `labels` over `classes` columns.
pub fn one_hot(labels: &[usize], classes: usize) -> DMatrix<f64> {
    DMatrix::from_fn(labels.len(), classes, |r, c| if labels[r] == c { 1.0 } else { 0.0 })
}

fn weight<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    1.0 + libm::floor(-libm::log(1.0 - u) / 0.7)
}

fn sample_weighted<R: Rng + ?Sized>(latent: &DMatrix<f64>, scale: f64, rng: &mut R) -> WeightedAdjacency {
    let n = latent.nrows();
    let mut a = DMatrix::zeros(n, n);
    for u in 0..n {
        for v in u + 1..n {
            let p = (scale * latent.row(u).dot(&latent.row(v))).clamp(0.0, 1.0);
            if rng.random_bool(p) {
                let w = weight(rng);
                a[(u, v)] = w;
                a[(v, u)] = w;
            }
        }
    }
    WeightedAdjacency::new(a).expect("sampled adjacency is symmetric and nonnegative")
}

/// Latent positions drawn around a per-type mean give two conditionally
/// independent weighted graphs; the second is relabeled by a uniform
/// permutation.
pub fn synthetic_connectome<R: Rng + ?Sized>(rng: &mut R) -> ConnectomePair {
    let types: Vec<usize> = TYPE_SIZES.iter().enumerate().flat_map(|(t, &s)| core::iter::repeat_n(t, s)).collect();
    let n = types.len();
    let latent = DMatrix::from_fn(n, LATENT_DIM, |r, c| {
        let z: f64 = rng.sample(StandardNormal);
        (TYPE_MEANS[types[r]][c] + LATENT_NOISE * z).max(LATENT_FLOOR)
    });
    let first = sample_weighted(&latent, 1.0, rng);
    let unlabeled = sample_weighted(&latent, SECOND_DENSITY, rng);
    let mut matching: Vec<usize> = (0..n).collect();
    matching.shuffle(rng);
    let mut second = DMatrix::zeros(n, n);
    let mut second_types = alloc::vec![0; n];
    for u in 0..n {
        second_types[matching[u]] = types[u];
        for v in 0..n {
            second[(matching[u], matching[v])] = unlabeled.matrix()[(u, v)];
        }
    }
    ConnectomePair {
        first,
        second: WeightedAdjacency::new(second).expect("relabeling keeps symmetry"),
        first_types: types,
        second_types,
        matching,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn shape_and_matching() {
        let p = synthetic_connectome(&mut stream_rng(1, 0));
        assert_eq!(p.n(), CONNECTOME_ORDER);
        assert!(p.first.is_hollow() && p.second.is_hollow());
        assert!(!p.first.is_binary());
        let mut seen = p.matching.clone();
        seen.sort_unstable();
        assert!(seen.iter().enumerate().all(|(i, &v)| i == v));
        for v in 0..p.n() {
            assert_eq!(p.first_types[v], p.second_types[p.matching[v]]);
        }
        let h = one_hot(&p.first_types, NEURON_TYPES);
        assert!(h.row_iter().all(|r| r.sum() == 1.0));
    }
}
