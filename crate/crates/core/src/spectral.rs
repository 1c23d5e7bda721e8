//! Spectral primitives: pass-to-ranks, diagonal augmentation, adjacency
//! spectral embedding, elbow selection and orthogonal Procrustes.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const EIGEN_EPS: f64 = 1e-14;
const MAX_SWEEPS: usize = 10_000;

/// A symmetric, nonnegative weighted adjacency matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedAdjacency {
    a: DMatrix<f64>,
}

impl WeightedAdjacency {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::SizeMismatch { what: "adjacency columns", expected: a.nrows(), found: a.ncols() });
        }
        if a.nrows() == 0 {
            return Err(Error::Empty("adjacency matrix"));
        }
        let n = a.nrows();
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let w = a[(i, j)];
                if w < 0.0 || w.is_nan() {
                    return Err(Error::NegativeWeight(w));
                }
                asym = asym.max(libm::fabs(w - a[(j, i)]));
            }
        }
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self { a })
    }

    /// Builds a hollow matrix from `(u, v, weight)` triples; repeated pairs
    /// keep the larger weight.
    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut a = DMatrix::zeros(n, n);
        for &(u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, order: n });
                }
            }
            if w < 0.0 || w.is_nan() {
                return Err(Error::NegativeWeight(w));
            }
            if u == v {
                continue;
            }
            let cur: f64 = a[(u, v)];
            a[(u, v)] = cur.max(w);
            a[(v, u)] = cur.max(w);
        }
        Self::new(a)
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.a
    }

    pub fn is_hollow(&self) -> bool {
        (0..self.n()).all(|i| self.a[(i, i)] == 0.0)
    }

    /// Every off-diagonal weight is 0 or 1.
    pub fn is_binary(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || self.a[(i, j)] == 0.0 || self.a[(i, j)] == 1.0))
    }
}

/// Per-vertex coordinate rows; row `i` belongs to vertex `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingFrame {
    rows: DMatrix<f64>,
}

impl EmbeddingFrame {
    pub fn new(rows: DMatrix<f64>) -> Result<Self> {
        if rows.ncols() == 0 {
            return Err(Error::InvalidDimension("embedding dimension must be at least 1"));
        }
        Ok(Self { rows })
    }

    pub fn n(&self) -> usize {
        self.rows.nrows()
    }

    pub fn d(&self) -> usize {
        self.rows.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.rows
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.rows
    }

    /// Rows selected by `index`, in that order.
    pub fn select_rows(&self, index: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(index.len(), self.d(), |r, c| self.rows[(index[r], c)])
    }

    /// Right-multiplies every row by `q`.
    pub fn transform(&self, q: &DMatrix<f64>) -> Self {
        Self { rows: &self.rows * q }
    }

    /// Appends feature columns `[self | features]`.
    pub fn append(&self, features: &DMatrix<f64>) -> Result<Self> {
        if features.nrows() != self.n() {
            return Err(Error::SizeMismatch { what: "feature rows", expected: self.n(), found: features.nrows() });
        }
        let (n, d, e) = (self.n(), self.d(), features.ncols());
        Ok(Self {
            rows: DMatrix::from_fn(n, d + e, |r, c| if c < d { self.rows[(r, c)] } else { features[(r, c - d)] }),
        })
    }
}

/// Replaces each nonzero off-diagonal weight by `2r/(s+1)`, where `r` is its
/// rank (ties averaged) among the `s` nonzero weights of the upper triangle.
/// The diagonal is left as is.
pub fn pass_to_ranks(a: &WeightedAdjacency) -> WeightedAdjacency {
    let n = a.n();
    let m = a.matrix();
    let mut entries: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if m[(i, j)] != 0.0 {
                entries.push((m[(i, j)], i, j));
            }
        }
    }
    entries.sort_by(|x, y| x.0.total_cmp(&y.0));
    let s = entries.len();
    let mut out = m.clone();
    let mut start = 0;
    while start < s {
        let mut end = start + 1;
        while end < s && entries[end].0 == entries[start].0 {
            end += 1;
        }
        // 1-based ranks start+1..=end averaged.
        let rank = (start + end + 1) as f64 / 2.0;
        let value = 2.0 * rank / (s as f64 + 1.0);
        for &(_, i, j) in &entries[start..end] {
            out[(i, j)] = value;
            out[(j, i)] = value;
        }
        start = end;
    }
    WeightedAdjacency { a: out }
}

/// Sets each diagonal entry to the mean off-diagonal weight of its row.
pub fn diag_augment(a: &WeightedAdjacency) -> Result<WeightedAdjacency> {
    let n = a.n();
    if n < 2 {
        return Err(Error::InvalidDimension("diagonal augmentation needs at least 2 vertices"));
    }
    let mut out = a.matrix().clone();
    for i in 0..n {
        let s: f64 = (0..n).filter(|&j| j != i).map(|j| out[(i, j)]).sum();
        out[(i, i)] = s / (n - 1) as f64;
    }
    Ok(WeightedAdjacency { a: out })
}

fn eigen(a: &WeightedAdjacency) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(a.matrix().clone(), EIGEN_EPS, MAX_SWEEPS).ok_or(Error::NoConvergence)
}

/// Eigenvalue indices ordered by decreasing magnitude, ties by index.
fn magnitude_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| libm::fabs(values[j]).total_cmp(&libm::fabs(values[i])).then(i.cmp(&j)));
    idx
}

/// Adjacency spectral embedding `U |S|^{1/2}` from the `d` eigenpairs of
/// largest magnitude. Each column is signed so that its largest-magnitude
/// entry is nonnegative.
pub fn ase(a: &WeightedAdjacency, d: usize) -> Result<EmbeddingFrame> {
    let n = a.n();
    if d == 0 || d > n {
        return Err(Error::InvalidDimension("embedding dimension must lie in 1..=n"));
    }
    let eig = eigen(a)?;
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let order = magnitude_order(&values);
    let mut x = DMatrix::zeros(n, d);
    for (c, &k) in order.iter().take(d).enumerate() {
        let scale = libm::sqrt(libm::fabs(values[k]));
        let col = eig.eigenvectors.column(k);
        let mut pivot = 0;
        for r in 1..n {
            if libm::fabs(col[r]) > libm::fabs(col[pivot]) {
                pivot = r;
            }
        }
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        for r in 0..n {
            x[(r, c)] = sign * scale * col[r];
        }
    }
    EmbeddingFrame::new(x)
}

/// Magnitudes of the eigenvalues of a symmetric matrix, in decreasing order.
pub fn singular_values(a: &WeightedAdjacency) -> Result<Vec<f64>> {
    let eig = eigen(a)?;
    let mut s: Vec<f64> = eig.eigenvalues.iter().map(|v| libm::fabs(*v)).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// Default elbow scan length for an `n`-vertex graph: `min(n, 3·⌈√n⌉)`.
pub fn default_scan_length(n: usize) -> usize {
    let hint = libm::ceil(libm::sqrt(n as f64)) as usize;
    n.min(3 * hint.max(1))
}

/// Gaussian profile-likelihood elbow of a decreasing sequence: the split `q`
/// (first group of size `q`) maximizing the two-mean, pooled-variance
/// likelihood. Degenerate inputs give 1.
pub fn profile_likelihood_elbow(values: &[f64]) -> usize {
    let p = values.len();
    if p <= 2 {
        return 1;
    }
    let spread = values.iter().fold(0.0f64, |acc, &v| acc.max(libm::fabs(v - values[0])));
    if spread <= 1e-12 * libm::fabs(values[0]).max(1.0) {
        return 1;
    }
    let mut best = (f64::NEG_INFINITY, 1);
    for q in 1..p {
        let (left, right) = values.split_at(q);
        let ss = |xs: &[f64]| {
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            xs.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        };
        let pooled = (ss(left) + ss(right)) / (p - 2) as f64;
        if pooled <= 0.0 {
            return q;
        }
        // Up to constants, the profile log-likelihood is -p/2 log σ² - SS/(2σ²).
        let ll = -0.5 * p as f64 * libm::log(pooled) - 0.5 * (ss(left) + ss(right)) / pooled;
        if ll > best.0 {
            best = (ll, q);
        }
    }
    best.1
}

/// Elbow of the top `max_d` singular values of `a`.
pub fn select_dim(a: &WeightedAdjacency, max_d: usize) -> Result<usize> {
    if max_d == 0 || max_d > a.n() {
        return Err(Error::InvalidDimension("scan length must lie in 1..=n"));
    }
    let s = singular_values(a)?;
    Ok(profile_likelihood_elbow(&s[..max_d]))
}

/// Orthogonal `Q` minimizing `‖XQ − Y‖_F`, namely `U Vᵀ` from the SVD
/// `XᵀY = U S Vᵀ`. When `XᵀY` is rank deficient the solver's orthonormal
/// completion of the singular bases is used, so `Q` stays orthogonal.
pub fn procrustes(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if x.shape() != y.shape() {
        return Err(Error::SizeMismatch { what: "procrustes rows", expected: x.nrows(), found: y.nrows() });
    }
    if x.ncols() == 0 {
        return Err(Error::InvalidDimension("procrustes needs at least one column"));
    }
    let m = x.transpose() * y;
    let svd = m.try_svd(true, true, EIGEN_EPS, MAX_SWEEPS).ok_or(Error::NoConvergence)?;
    let u = svd.u.ok_or(Error::NoConvergence)?;
    let v_t = svd.v_t.ok_or(Error::NoConvergence)?;
    Ok(u * v_t)
}
