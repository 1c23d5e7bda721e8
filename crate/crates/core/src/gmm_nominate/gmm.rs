use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Iteration cap of one EM run.
pub const MAX_ITERATIONS: usize = 500;
/// EM stops once the relative log-likelihood change drops below this.
pub const RELATIVE_TOL: f64 = 1e-8;
/// Ridge `r` relative to the mean eigenvalue of the pooled covariance.
pub const RIDGE_SCALE: f64 = 1e-6;

const LN_2PI: f64 = 1.837_877_066_409_345_3;

/// A full-covariance Gaussian mixture fitted by EM.
#[derive(Clone, Debug)]
pub struct GmmModel {
    weights: Vec<f64>,
    means: Vec<DVector<f64>>,
    covariances: Vec<DMatrix<f64>>,
    responsibilities: DMatrix<f64>,
    trace: Vec<f64>,
    objective: Vec<f64>,
    ridge: f64,
    converged: bool,
}

impl GmmModel {
    /// Number of components.
    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn d(&self) -> usize {
        self.means[0].len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn means(&self) -> &[DVector<f64>] {
        &self.means
    }

    pub fn covariances(&self) -> &[DMatrix<f64>] {
        &self.covariances
    }

    /// Posterior component probabilities of the fitted rows, one row per point.
    pub fn responsibilities(&self) -> &DMatrix<f64> {
        &self.responsibilities
    }

    /// Log-likelihood after every E-step, the last entry belonging to the
    /// returned parameters.
    pub fn log_likelihood_trace(&self) -> &[f64] {
        &self.trace
    }

    /// `ll − (n·r/2)·Σ_k tr Σ_k⁻¹` after every E-step; EM never decreases it.
    pub fn objective_trace(&self) -> &[f64] {
        &self.objective
    }

    /// The ridge `r` of this fit.
    pub fn ridge(&self) -> f64 {
        self.ridge
    }

    pub fn log_likelihood(&self) -> f64 {
        *self.trace.last().expect("at least one E-step")
    }

    /// False when the iteration cap was reached first.
    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Most responsible component of every fitted row, ties to the lower index.
    pub fn labels(&self) -> Vec<usize> {
        (0..self.responsibilities.nrows()).map(|r| argmax(self.responsibilities.row(r).iter().copied())).collect()
    }

    /// Number of free parameters.
    pub fn parameter_count(&self) -> usize {
        let (k, d) = (self.k(), self.d());
        (k - 1) + k * d + k * d * (d + 1) / 2
    }

    /// Bayesian information criterion `−2·ll + p·ln n` on the fitted rows.
    pub fn bic(&self) -> f64 {
        let n = self.responsibilities.nrows() as f64;
        -2.0 * self.log_likelihood() + self.parameter_count() as f64 * libm::log(n)
    }

    /// Most probable component of each row of `z` under the fitted model.
    pub fn predict(&self, z: &DMatrix<f64>) -> Result<Vec<usize>> {
        if z.ncols() != self.d() {
            return Err(Error::SizeMismatch { what: "mixture input columns", expected: self.d(), found: z.ncols() });
        }
        let factors = factor_all(&self.covariances)?;
        let (_, resp) = e_step(z, &self.weights, &self.means, &factors);
        Ok((0..resp.nrows()).map(|r| argmax(resp.row(r).iter().copied())).collect())
    }
}

fn argmax<I: Iterator<Item = f64>>(xs: I) -> usize {
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, x) in xs.enumerate() {
        if x > best.0 {
            best = (x, i);
        }
    }
    best.1
}

fn squared_distance(z: &DMatrix<f64>, a: usize, b: &DVector<f64>) -> f64 {
    (0..z.ncols()).map(|c| (z[(a, c)] - b[c]) * (z[(a, c)] - b[c])).sum()
}

/// k-means++ seeding: the first centre uniformly, each further centre with
/// probability proportional to its squared distance from the chosen ones.
fn seed_centres<R: Rng + ?Sized>(z: &DMatrix<f64>, k: usize, rng: &mut R) -> Vec<DVector<f64>> {
    let n = z.nrows();
    let row = |i: usize| z.row(i).transpose();
    let mut centres = vec![row(rng.random_range(0..n))];
    let mut nearest: Vec<f64> = (0..n).map(|i| squared_distance(z, i, &centres[0])).collect();
    while centres.len() < k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &w) in nearest.iter().enumerate() {
                if target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        } else {
            rng.random_range(0..n)
        };
        let c = row(pick);
        for (i, best) in nearest.iter_mut().enumerate() {
            *best = best.min(squared_distance(z, i, &c));
        }
        centres.push(c);
    }
    centres
}

/// `r = RIDGE_SCALE · tr Σ / d` of the pooled covariance, or `RIDGE_SCALE`
/// when that trace is zero.
fn ridge_of(pooled: &DMatrix<f64>) -> f64 {
    let scale = pooled.trace() / pooled.nrows() as f64;
    RIDGE_SCALE * if scale > 0.0 { scale } else { 1.0 }
}

fn add_ridge(mut cov: DMatrix<f64>, ridge: f64) -> DMatrix<f64> {
    for i in 0..cov.nrows() {
        cov[(i, i)] += ridge;
    }
    cov
}

/// `−(n·r/2)·Σ_k tr Σ_k⁻¹`, the penalty whose maximizer gives the ridged
/// M-step.
fn penalty(factors: &[Cholesky<f64, Dyn>], n: usize, ridge: f64) -> f64 {
    let trace: f64 = factors.iter().map(|f| f.inverse().trace()).sum();
    -0.5 * n as f64 * ridge * trace
}

fn factor_all(covariances: &[DMatrix<f64>]) -> Result<Vec<Cholesky<f64, Dyn>>> {
    covariances
        .iter()
        .enumerate()
        .map(|(c, s)| Cholesky::new(s.clone()).ok_or(Error::SingularCovariance { component: c }))
        .collect()
}

fn log_density(z: &DMatrix<f64>, i: usize, mean: &DVector<f64>, factor: &Cholesky<f64, Dyn>) -> f64 {
    let d = mean.len();
    let diff = DVector::from_fn(d, |c, _| z[(i, c)] - mean[c]);
    let l = factor.l_dirty();
    let y = l.solve_lower_triangular(&diff).expect("Cholesky factor has a positive diagonal");
    let log_det: f64 = (0..d).map(|c| libm::log(l[(c, c)])).sum::<f64>() * 2.0;
    -0.5 * (d as f64 * LN_2PI + log_det + y.norm_squared())
}

/// Log-likelihood and responsibilities of the current parameters.
fn e_step(
    z: &DMatrix<f64>,
    weights: &[f64],
    means: &[DVector<f64>],
    factors: &[Cholesky<f64, Dyn>],
) -> (f64, DMatrix<f64>) {
    let (n, k) = (z.nrows(), weights.len());
    let mut resp = DMatrix::zeros(n, k);
    let mut ll = 0.0;
    for i in 0..n {
        let mut top = f64::NEG_INFINITY;
        for c in 0..k {
            let v = libm::log(weights[c]) + log_density(z, i, &means[c], &factors[c]);
            resp[(i, c)] = v;
            top = top.max(v);
        }
        let mut total = 0.0;
        for c in 0..k {
            let e = libm::exp(resp[(i, c)] - top);
            resp[(i, c)] = e;
            total += e;
        }
        for c in 0..k {
            resp[(i, c)] /= total;
        }
        ll += top + libm::log(total);
    }
    (ll, resp)
}

/// Weighted means and covariances `S_k + (n·r/n_k)·I`; components that lost
/// all mass keep their previous parameters.
fn m_step(
    z: &DMatrix<f64>,
    resp: &DMatrix<f64>,
    weights: &mut [f64],
    means: &mut [DVector<f64>],
    covariances: &mut [DMatrix<f64>],
    ridge: f64,
) {
    let (n, d) = (z.nrows(), z.ncols());
    for c in 0..weights.len() {
        let nk: f64 = resp.column(c).sum();
        if nk <= f64::EPSILON * n as f64 {
            continue;
        }
        let mean = DVector::from_fn(d, |j, _| (0..n).map(|i| resp[(i, c)] * z[(i, j)]).sum::<f64>() / nk);
        let mut cov = DMatrix::zeros(d, d);
        for i in 0..n {
            let r = resp[(i, c)];
            for a in 0..d {
                let da = z[(i, a)] - mean[a];
                for b in a..d {
                    cov[(a, b)] += r * da * (z[(i, b)] - mean[b]);
                }
            }
        }
        for a in 0..d {
            for b in a..d {
                let v = cov[(a, b)] / nk;
                cov[(a, b)] = v;
                cov[(b, a)] = v;
            }
        }
        weights[c] = nk / n as f64;
        means[c] = mean;
        covariances[c] = add_ridge(cov, ridge * n as f64 / nk);
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
}

/// Sample covariance of the rows of `z` (divisor `n`).
pub fn sample_covariance(z: &DMatrix<f64>) -> DMatrix<f64> {
    let n = z.nrows() as f64;
    let mean = z.row_mean();
    let centred = DMatrix::from_fn(z.nrows(), z.ncols(), |i, j| z[(i, j)] - mean[j]);
    centred.transpose() * &centred / n
}

/// Fits a `k`-component full-covariance mixture to the rows of `z` by EM.
///
/// Centres are seeded k-means++ style from `seed`; every component starts
/// from the ridged pooled sample covariance with equal weight. The M-step
/// maximizes the log-likelihood penalized by `−(n·r/2)·Σ_k tr Σ_k⁻¹`, which
/// keeps every covariance positive definite.
pub fn gmm_fit(z: &DMatrix<f64>, k: usize, seed: u64) -> Result<GmmModel> {
    let (n, d) = (z.nrows(), z.ncols());
    if k == 0 {
        return Err(Error::InvalidParameter("mixture needs at least one component".into()));
    }
    if d == 0 {
        return Err(Error::InvalidDimension("mixture input has no columns"));
    }
    if k > n {
        return Err(Error::InvalidParameter(alloc::format!("{k} components for {n} rows")));
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("mixture input is not finite".into()));
    }
    let mut rng = stream_rng(seed, 0);
    let pooled = sample_covariance(z);
    let ridge = ridge_of(&pooled);
    let pooled = add_ridge(pooled, ridge);
    let mut weights = vec![1.0 / k as f64; k];
    let mut means = seed_centres(z, k, &mut rng);
    let mut covariances = vec![pooled; k];

    let mut trace = Vec::new();
    let mut objective = Vec::new();
    let mut converged = false;
    loop {
        let factors = factor_all(&covariances)?;
        let (ll, resp) = e_step(z, &weights, &means, &factors);
        if let Some(&prev) = trace.last() {
            let prev: f64 = prev;
            if libm::fabs(ll - prev) <= RELATIVE_TOL * libm::fabs(prev).max(f64::MIN_POSITIVE) {
                converged = true;
            }
        }
        trace.push(ll);
        objective.push(ll + penalty(&factors, n, ridge));
        if converged || trace.len() > MAX_ITERATIONS {
            return Ok(GmmModel { weights, means, covariances, responsibilities: resp, trace, objective, ridge, converged });
        }
        m_step(z, &resp, &mut weights, &mut means, &mut covariances, ridge);
    }
}

/// Fits `1..=max_k` components (capped by the row count) and keeps the fit
/// with the smallest BIC, ties to fewer components.
pub fn select_components(z: &DMatrix<f64>, max_k: usize, seed: u64) -> Result<GmmModel> {
    let mut best: Option<GmmModel> = None;
    for k in 1..=max_k.min(z.nrows()).max(1) {
        let fit = gmm_fit(z, k, seed)?;
        if best.as_ref().is_none_or(|b| fit.bic() < b.bic()) {
            best = Some(fit);
        }
    }
    best.ok_or(Error::Empty("component range"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;
    use rand_distr::StandardNormal;

    fn blobs(seed: u64) -> (DMatrix<f64>, Vec<usize>) {
        let mut rng = stream_rng(seed, 1);
        let mut z = DMatrix::zeros(200, 2);
        let truth: Vec<usize> = (0..200).map(|i| i % 2).collect();
        for i in 0..200 {
            let centre = if truth[i] == 0 { 5.0 } else { -5.0 };
            for c in 0..2 {
                let e: f64 = rng.sample(StandardNormal);
                z[(i, c)] = centre + e;
            }
        }
        (z, truth)
    }

    #[test]
    fn one_component_is_the_sample_moments() {
        let (z, _) = blobs(1);
        let m = gmm_fit(&z, 1, 0).unwrap();
        let mean = z.row_mean().transpose();
        assert!((&m.means()[0] - mean).norm() < 1e-12);
        let ridged = add_ridge(sample_covariance(&z), m.ridge());
        assert!((&m.covariances()[0] - ridged).norm() < 1e-10);
        assert!(m.ridge() > 0.0);
        assert!((m.weights()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn recovers_two_blobs() {
        let (z, truth) = blobs(2);
        let m = gmm_fit(&z, 2, 7).unwrap();
        assert!(m.converged());
        for target in [5.0, -5.0] {
            let centre = DVector::from_element(2, target);
            assert!(m.means().iter().any(|mu| (mu - &centre).amax() < 0.3));
        }
        let labels = m.labels();
        let agree = labels.iter().zip(&truth).filter(|(a, b)| a == b).count();
        assert!(agree.max(200 - agree) >= 196);
    }

    #[test]
    fn responsibilities_are_row_stochastic() {
        let (z, _) = blobs(3);
        let m = gmm_fit(&z, 3, 1).unwrap();
        for r in 0..z.nrows() {
            assert!((m.responsibilities().row(r).sum() - 1.0).abs() < 1e-12);
        }
        assert!((m.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for s in m.covariances() {
            let min = SymmetricEigen::new(s.clone()).eigenvalues.min();
            assert!(min > 0.0);
        }
    }

    #[test]
    fn log_likelihood_never_decreases() {
        let (z, _) = blobs(4);
        let m = gmm_fit(&z, 4, 9).unwrap();
        assert!(m.log_likelihood_trace().windows(2).all(|w| w[1] >= w[0] - 1e-9 * w[0].abs()));
        assert!(m.objective_trace().windows(2).all(|w| w[1] >= w[0] - 1e-9 * w[0].abs()));
    }

    #[test]
    fn duplicate_rows_are_regularized() {
        let z = DMatrix::from_row_slice(4, 2, &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
        let m = gmm_fit(&z, 2, 0).unwrap();
        assert!(m.log_likelihood().is_finite());
    }

    #[test]
    fn bic_prefers_two_blobs() {
        let (z, _) = blobs(5);
        assert_eq!(select_components(&z, 4, 3).unwrap().k(), 2);
    }

    #[test]
    fn invalid_inputs() {
        let (z, _) = blobs(6);
        assert!(gmm_fit(&z, 0, 0).is_err());
        assert!(gmm_fit(&z.rows(0, 2).into_owned(), 3, 0).is_err());
    }
}
