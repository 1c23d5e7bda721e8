//! Mixture-model nomination on embedded vertices.
//!
//! Rows of both graphs' embeddings are clustered by a Gaussian mixture; a
//! candidate `u` of the second graph is scored against the vertices of
//! interest `V*` of the first by
//! `D(V*, u) = min_{v∈V*} max(‖z_v − z_u‖_{Σ_u}, ‖z_v − z_u‖_{Σ_v})`,
//! where `Σ_w` is the covariance of the component of `w`, and candidates are
//! ranked by increasing `D`.

mod gmm;
mod pipeline;

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

pub use gmm::{
    gmm_fit, sample_covariance, select_components, GmmModel, MAX_ITERATIONS, RELATIVE_TOL, RIDGE_SCALE,
};
pub use pipeline::{
    embed_pair, run_pipeline, EmbeddedPair, PipelineInput, PipelineOptions, PipelineOutput, MAX_COMPONENTS,
};

/// Which inputs a nomination used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Inputs {
    GraphAndFeatures,
    GraphOnly,
    FeaturesOnly,
}

impl Inputs {
    pub fn name(self) -> &'static str {
        match self {
            Inputs::GraphAndFeatures => "graph+features",
            Inputs::GraphOnly => "graph",
            Inputs::FeaturesOnly => "features",
        }
    }
}

/// Rows of one graph's representation together with the covariance factor
/// of each row's mixture component.
#[derive(Clone, Debug)]
pub struct ComponentFrame {
    rows: DMatrix<f64>,
    component: Vec<usize>,
    factors: Vec<Cholesky<f64, Dyn>>,
}

impl ComponentFrame {
    /// `component[i]` indexes `covariances` for row `i`.
    pub fn new(rows: DMatrix<f64>, covariances: &[DMatrix<f64>], component: Vec<usize>) -> Result<Self> {
        if component.len() != rows.nrows() {
            return Err(Error::SizeMismatch { what: "component labels", expected: rows.nrows(), found: component.len() });
        }
        if let Some(&c) = component.iter().find(|&&c| c >= covariances.len()) {
            return Err(Error::InvalidParameter(alloc::format!("component {c} of {}", covariances.len())));
        }
        let mut factors = Vec::with_capacity(covariances.len());
        for (c, s) in covariances.iter().enumerate() {
            if s.nrows() != rows.ncols() || s.ncols() != rows.ncols() {
                return Err(Error::SizeMismatch { what: "covariance order", expected: rows.ncols(), found: s.nrows() });
            }
            factors.push(Cholesky::new(s.clone()).ok_or(Error::SingularCovariance { component: c })?);
        }
        Ok(Self { rows, component, factors })
    }

    /// Rows labelled by `model`'s most probable component.
    pub fn assign(rows: DMatrix<f64>, model: &GmmModel) -> Result<Self> {
        let component = model.predict(&rows)?;
        Self::new(rows, model.covariances(), component)
    }

    pub fn n(&self) -> usize {
        self.rows.nrows()
    }

    pub fn rows(&self) -> &DMatrix<f64> {
        &self.rows
    }

    pub fn component(&self) -> &[usize] {
        &self.component
    }

    /// `√(δᵀ Σ⁻¹ δ)` with `Σ` the covariance of row `i`'s component.
    fn norm(&self, i: usize, delta: &DVector<f64>) -> f64 {
        let l = self.factors[self.component[i]].l_dirty();
        let y = l.solve_lower_triangular(delta).expect("Cholesky factor has a positive diagonal");
        y.norm()
    }
}

/// `D(V*, u)` for candidate `u` of the second frame.
pub fn interest_distance(first: &ComponentFrame, second: &ComponentFrame, interest: &[usize], u: usize) -> Result<f64> {
    check_frames(first, second, interest)?;
    if u >= second.n() {
        return Err(Error::VertexOutOfRange { vertex: u, order: second.n() });
    }
    Ok(distance(first, second, interest, u))
}

fn check_frames(first: &ComponentFrame, second: &ComponentFrame, interest: &[usize]) -> Result<()> {
    if first.rows.ncols() != second.rows.ncols() {
        return Err(Error::SizeMismatch { what: "frame columns", expected: first.rows.ncols(), found: second.rows.ncols() });
    }
    if interest.is_empty() {
        return Err(Error::Empty("vertices of interest"));
    }
    if let Some(&v) = interest.iter().find(|&&v| v >= first.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, order: first.n() });
    }
    Ok(())
}

fn distance(first: &ComponentFrame, second: &ComponentFrame, interest: &[usize], u: usize) -> f64 {
    let d = first.rows.ncols();
    interest
        .iter()
        .map(|&v| {
            let delta = DVector::from_fn(d, |c, _| first.rows[(v, c)] - second.rows[(u, c)]);
            second.norm(u, &delta).max(first.norm(v, &delta))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Ranked candidates of the second graph with their distances.
#[derive(Clone, Debug, PartialEq)]
pub struct NominationResult {
    ranking: Vec<usize>,
    distances: Vec<f64>,
    inputs: Inputs,
}

impl NominationResult {
    /// Candidates, best first.
    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    /// `D(V*, ·)` of each entry of [`NominationResult::ranking`].
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn inputs(&self) -> Inputs {
        self.inputs
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }
}

/// Ranks every vertex of the second frame outside `excluded` by increasing
/// `D(V*, u)`, ties by vertex index.
pub fn nominate(
    first: &ComponentFrame,
    second: &ComponentFrame,
    interest: &[usize],
    excluded: &[usize],
    inputs: Inputs,
) -> Result<NominationResult> {
    check_frames(first, second, interest)?;
    let mut skip = vec![false; second.n()];
    for &s in excluded {
        *skip.get_mut(s).ok_or(Error::VertexOutOfRange { vertex: s, order: second.n() })? = true;
    }
    let mut scored: Vec<(f64, usize)> =
        (0..second.n()).filter(|&u| !skip[u]).map(|u| (distance(first, second, interest, u), u)).collect();
    if scored.is_empty() {
        return Err(Error::Empty("candidate set"));
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(NominationResult {
        ranking: scored.iter().map(|s| s.1).collect(),
        distances: scored.iter().map(|s| s.0).collect(),
        inputs,
    })
}

/// `r(k) = |top-k ∩ truth|` for every `k` in `ks`.
pub fn precision_curve(result: &NominationResult, truth: &[usize], ks: &[usize]) -> Result<Vec<usize>> {
    if truth.is_empty() {
        return Err(Error::Empty("truth set"));
    }
    let mut sorted = truth.to_vec();
    sorted.sort_unstable();
    let hits: Vec<bool> = result.ranking.iter().map(|u| sorted.binary_search(u).is_ok()).collect();
    let mut cumulative = Vec::with_capacity(hits.len() + 1);
    cumulative.push(0usize);
    for &h in &hits {
        cumulative.push(cumulative.last().unwrap() + usize::from(h));
    }
    ks.iter()
        .map(|&k| cumulative.get(k).copied().ok_or(Error::KOutOfRange { k, max: hits.len() }))
        .collect()
}

/// 1-based rank of each query's match when the query alone is the vertex of
/// interest; `None` when the match is excluded.
pub fn match_ranks(
    first: &ComponentFrame,
    second: &ComponentFrame,
    queries: &[(usize, usize)],
    excluded: &[usize],
) -> Result<Vec<Option<usize>>> {
    queries
        .iter()
        .map(|&(v, m)| {
            if m >= second.n() {
                return Err(Error::VertexOutOfRange { vertex: m, order: second.n() });
            }
            let r = nominate(first, second, &[v], excluded, Inputs::GraphAndFeatures)?;
            Ok(r.ranking.iter().position(|&u| u == m).map(|p| p + 1))
        })
        .collect()
}

/// `y(x)`: the number of ranks at most `x`, for `x = 1..=len`.
pub fn match_curve(ranks: &[Option<usize>], len: usize) -> Vec<usize> {
    let mut counts = vec![0usize; len + 1];
    for r in ranks.iter().flatten() {
        if *r <= len {
            counts[*r] += 1;
        }
    }
    let mut total = 0;
    counts[1..].iter().map(|c| {
        total += c;
        total
    }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(rows: &[f64], d: usize, covs: &[DMatrix<f64>], comp: Vec<usize>) -> ComponentFrame {
        ComponentFrame::new(DMatrix::from_row_slice(rows.len() / d, d, rows), covs, comp).unwrap()
    }

    #[test]
    fn mahalanobis_takes_the_larger_norm() {
        let covs = [DMatrix::identity(2, 2) * 4.0, DMatrix::identity(2, 2)];
        let first = frame(&[3.0, 0.0], 2, &covs, vec![1]);
        let second = frame(&[0.0, 0.0], 2, &covs, vec![0]);
        assert!((interest_distance(&first, &second, &[0], 0).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn identity_covariances_give_euclidean_ranking() {
        let covs = [DMatrix::identity(2, 2)];
        let first = frame(&[0.0, 0.0, 10.0, 0.0], 2, &covs, vec![0, 0]);
        let second = frame(&[4.0, 0.0, 9.0, 0.0, 0.0, 1.0, 0.0, 0.0], 2, &covs, vec![0; 4]);
        let r = nominate(&first, &second, &[0, 1], &[3], Inputs::GraphOnly).unwrap();
        assert_eq!(r.ranking(), &[1, 2, 0]);
        assert_eq!(r.distances(), &[1.0, 1.0, 4.0]);
        assert_eq!(interest_distance(&first, &second, &[0], 3).unwrap(), 0.0);
    }

    #[test]
    fn empty_candidates_and_interest() {
        let covs = [DMatrix::identity(1, 1)];
        let first = frame(&[0.0], 1, &covs, vec![0]);
        let second = frame(&[1.0], 1, &covs, vec![0]);
        assert!(nominate(&first, &second, &[0], &[0], Inputs::GraphOnly).is_err());
        assert!(nominate(&first, &second, &[], &[], Inputs::GraphOnly).is_err());
        assert_eq!(nominate(&first, &second, &[0], &[], Inputs::GraphOnly).unwrap().ranking(), &[0]);
    }

    #[test]
    fn match_curve_is_cumulative() {
        assert_eq!(match_curve(&[Some(2), None, Some(1), Some(2), Some(9)], 3), vec![1, 3, 3]);
        let covs = [DMatrix::identity(1, 1)];
        let first = frame(&[0.0, 5.0], 1, &covs, vec![0, 0]);
        let second = frame(&[5.1, 0.2, 9.0], 1, &covs, vec![0; 3]);
        let ranks = match_ranks(&first, &second, &[(0, 1), (1, 0), (1, 2)], &[2]).unwrap();
        assert_eq!(ranks, vec![Some(1), Some(1), None]);
    }

    #[test]
    fn precision_counts() {
        let r = NominationResult { ranking: vec![4, 1, 3, 0, 2], distances: vec![0.0; 5], inputs: Inputs::GraphOnly };
        assert_eq!(precision_curve(&r, &[1, 2], &[0, 1, 2, 5]).unwrap(), vec![0, 0, 1, 2]);
        assert_eq!(precision_curve(&r, &[9], &[5]).unwrap(), vec![0]);
        assert!(precision_curve(&r, &[1], &[6]).is_err());
        assert!(precision_curve(&r, &[], &[1]).is_err());
    }
}
