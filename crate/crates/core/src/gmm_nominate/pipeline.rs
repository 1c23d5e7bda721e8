use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::{gmm_fit, nominate, select_components, ComponentFrame, GmmModel, Inputs, NominationResult};
use crate::error::{Error, Result};
use crate::spectral::{
    ase, default_scan_length, diag_augment, pass_to_ranks, procrustes, select_dim, EmbeddingFrame, WeightedAdjacency,
};

/// Largest component count tried by the BIC scan.
pub const MAX_COMPONENTS: usize = 10;

/// Stage switches and model sizes of [`run_pipeline`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    pub use_graph: bool,
    pub use_features: bool,
    /// Embedding dimension; the larger of the two elbows when unset.
    pub dim: Option<usize>,
    /// Mixture components; chosen by BIC over `1..=10` when unset.
    pub components: Option<usize>,
    /// Seed of the mixture initialization.
    pub seed: u64,
    /// Standardize feature columns (pooled over both graphs) before use.
    pub scale_features: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self { use_graph: true, use_features: true, dim: None, components: None, seed: 0, scale_features: false }
    }
}

impl PipelineOptions {
    pub fn inputs(&self) -> Result<Inputs> {
        match (self.use_graph, self.use_features) {
            (true, true) => Ok(Inputs::GraphAndFeatures),
            (true, false) => Ok(Inputs::GraphOnly),
            (false, true) => Ok(Inputs::FeaturesOnly),
            (false, false) => Err(Error::InvalidParameter("pipeline needs the graphs, the features or both".into())),
        }
    }
}

/// Graphs, features and correspondences fed to [`run_pipeline`].
#[derive(Clone, Copy, Debug)]
pub struct PipelineInput<'a> {
    pub g1: &'a WeightedAdjacency,
    pub g2: &'a WeightedAdjacency,
    pub x: Option<&'a DMatrix<f64>>,
    pub y: Option<&'a DMatrix<f64>>,
    /// Seed pairs `(vertex of G1, vertex of G2)`.
    pub seeds: &'a [(usize, usize)],
    /// Vertices of interest in `G1`.
    pub interest: &'a [usize],
}

/// Both graphs embedded at a common dimension, the second rotated onto the
/// first through the seeds.
#[derive(Clone, Debug)]
pub struct EmbeddedPair {
    pub z1: EmbeddingFrame,
    pub z2: EmbeddingFrame,
    pub dim: usize,
    pub rotation: DMatrix<f64>,
}

/// Pass-to-ranks, diagonal augmentation, embedding of both graphs at the
/// common dimension and seeded Procrustes alignment.
pub fn embed_pair(
    g1: &WeightedAdjacency,
    g2: &WeightedAdjacency,
    seeds: &[(usize, usize)],
    dim: Option<usize>,
) -> Result<EmbeddedPair> {
    check_seeds(seeds, g1.n(), g2.n())?;
    let a1 = diag_augment(&pass_to_ranks(g1))?;
    let a2 = diag_augment(&pass_to_ranks(g2))?;
    let dim = match dim {
        Some(d) => d,
        None => select_dim(&a1, default_scan_length(a1.n()))?.max(select_dim(&a2, default_scan_length(a2.n()))?),
    };
    if dim == 0 || dim > a1.n().min(a2.n()) {
        return Err(Error::InvalidDimension("embedding dimension must lie in 1..=min(n1, n2)"));
    }
    let x1 = ase(&a1, dim)?;
    let x2 = ase(&a2, dim)?;
    if seeds.len() < dim {
        log::warn!("{} seeds for dimension {dim}: the alignment is under-determined", seeds.len());
    }
    let s1: Vec<usize> = seeds.iter().map(|s| s.0).collect();
    let s2: Vec<usize> = seeds.iter().map(|s| s.1).collect();
    let rotation = procrustes(&x2.select_rows(&s2), &x1.select_rows(&s1))?;
    let z2 = x2.transform(&rotation);
    Ok(EmbeddedPair { z1: x1, z2, dim, rotation })
}

fn check_seeds(seeds: &[(usize, usize)], n1: usize, n2: usize) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::Empty("seed pairs"));
    }
    for &(a, b) in seeds {
        if a >= n1 {
            return Err(Error::VertexOutOfRange { vertex: a, order: n1 });
        }
        if b >= n2 {
            return Err(Error::VertexOutOfRange { vertex: b, order: n2 });
        }
    }
    Ok(())
}

/// Nomination together with the fitted pieces it came from.
#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub result: NominationResult,
    /// Embedding dimension, when the graphs were used.
    pub dim: Option<usize>,
    pub model: GmmModel,
    /// Rows of `G1` and `G2` with their components, for further queries.
    pub first: ComponentFrame,
    pub second: ComponentFrame,
}

fn standardize(x: &DMatrix<f64>, y: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = (x.nrows() + y.nrows()) as f64;
    let mut xs = x.clone();
    let mut ys = y.clone();
    for c in 0..x.ncols() {
        let mean = (x.column(c).sum() + y.column(c).sum()) / n;
        let ss: f64 = x.column(c).iter().chain(y.column(c).iter()).map(|v| (v - mean) * (v - mean)).sum();
        let sd = libm::sqrt(ss / n);
        let scale = if sd > 0.0 { 1.0 / sd } else { 1.0 };
        xs.column_mut(c).iter_mut().for_each(|v| *v = (*v - mean) * scale);
        ys.column_mut(c).iter_mut().for_each(|v| *v = (*v - mean) * scale);
    }
    (xs, ys)
}

/// The full nomination chain: embedding and alignment (when the graphs are
/// used), feature append (when the features are used), one mixture fit over
/// the rows of both graphs, and the ranking of the non-seed vertices of `G2`.
pub fn run_pipeline(input: &PipelineInput<'_>, opts: &PipelineOptions) -> Result<PipelineOutput> {
    let inputs = opts.inputs()?;
    let (n1, n2) = (input.g1.n(), input.g2.n());
    check_seeds(input.seeds, n1, n2)?;
    let features = if opts.use_features {
        let (x, y) = match (input.x, input.y) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::InvalidParameter("feature matrices are required when features are used".into())),
        };
        if x.nrows() != n1 {
            return Err(Error::SizeMismatch { what: "first feature matrix rows", expected: n1, found: x.nrows() });
        }
        if y.nrows() != n2 {
            return Err(Error::SizeMismatch { what: "second feature matrix rows", expected: n2, found: y.nrows() });
        }
        if x.ncols() != y.ncols() {
            return Err(Error::SizeMismatch { what: "feature columns", expected: x.ncols(), found: y.ncols() });
        }
        Some(if opts.scale_features { standardize(x, y) } else { (x.clone(), y.clone()) })
    } else {
        None
    };

    let (rows1, rows2, dim) = if opts.use_graph {
        let pair = embed_pair(input.g1, input.g2, input.seeds, opts.dim)?;
        let (z1, z2) = match &features {
            Some((x, y)) => (pair.z1.append(x)?, pair.z2.append(y)?),
            None => (pair.z1, pair.z2),
        };
        (z1.into_matrix(), z2.into_matrix(), Some(pair.dim))
    } else {
        let (x, y) = features.expect("features are used when the graphs are not");
        (x, y, None)
    };

    let joint = DMatrix::from_fn(n1 + n2, rows1.ncols(), |r, c| if r < n1 { rows1[(r, c)] } else { rows2[(r - n1, c)] });
    let model = match opts.components {
        Some(k) => gmm_fit(&joint, k, opts.seed)?,
        None => select_components(&joint, MAX_COMPONENTS, opts.seed)?,
    };
    let labels = model.labels();
    let first = ComponentFrame::new(rows1, model.covariances(), labels[..n1].to_vec())?;
    let second = ComponentFrame::new(rows2, model.covariances(), labels[n1..].to_vec())?;
    let excluded: Vec<usize> = input.seeds.iter().map(|s| s.1).collect();
    let result = nominate(&first, &second, input.interest, &excluded, inputs)?;
    Ok(PipelineOutput { result, dim, model, first, second })
}
