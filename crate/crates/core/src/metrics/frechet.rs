//! Fréchet distance between Gaussian fits of two feature sets:
//! `‖μ_a − μ_b‖² + tr(Σ_a + Σ_b − 2(Σ_a Σ_b)^{1/2})`.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::Real;

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// Returns eigenvalues and the orthogonal matrix of column eigenvectors.
fn jacobi_eigen<F: Real>(a: &Array2<F>) -> (Vec<F>, Array2<F>) {
    let n = a.dim().0;
    let mut m = a.clone();
    let mut v = Array2::eye(n);
    let tol = F::from_f64(1e-14).unwrap();
    for _sweep in 0..100 {
        let mut off = F::zero();
        for i in 0..n {
            for j in i + 1..n {
                off += m[[i, j]] * m[[i, j]];
            }
        }
        let norm = (0..n).map(|i| m[[i, i]] * m[[i, i]]).sum::<F>() + off + off;
        if off + off <= tol * norm.max(F::from_f64(1e-30).unwrap()) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[[p, q]].abs() <= F::from_f64(1e-300).unwrap() {
                    continue;
                }
                let theta = (m[[q, q]] - m[[p, p]]) / (F::from_f64(2.0).unwrap() * m[[p, q]]);
                let t = {
                    let sign = if theta >= F::zero() { F::one() } else { -F::one() };
                    sign / (theta.abs() + (theta * theta + F::one()).sqrt())
                };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[[k, p]];
                    let mkq = m[[k, q]];
                    m[[k, p]] = c * mkp - s * mkq;
                    m[[k, q]] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[[p, k]];
                    let mqk = m[[q, k]];
                    m[[p, k]] = c * mpk - s * mqk;
                    m[[q, k]] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eig = (0..n).map(|i| m[[i, i]]).collect();
    (eig, v)
}

/// Symmetric PSD square root via eigendecomposition (negative eigenvalues
/// from rounding are clamped to zero).
fn sqrtm_psd<F: Real>(a: &Array2<F>) -> Array2<F> {
    let (eig, v) = jacobi_eigen(a);
    let n = a.dim().0;
    let mut scaled = v.clone();
    for (j, &l) in eig.iter().enumerate() {
        let s = l.max(F::zero()).sqrt();
        for i in 0..n {
            scaled[[i, j]] = v[[i, j]] * s;
        }
    }
    scaled.dot(&v.t())
}

fn mean_and_cov<F: Real>(feats: &[Vec<F>], dim: usize) -> (Vec<F>, Array2<F>) {
    let n = feats.len();
    let nf = F::from_usize(n).unwrap();
    let mut mean = vec![F::zero(); dim];
    for f in feats {
        for (m, &x) in mean.iter_mut().zip(f) {
            *m += x;
        }
    }
    for m in mean.iter_mut() {
        *m /= nf;
    }
    let mut cov = Array2::zeros((dim, dim));
    if n > 1 {
        let denom = F::from_usize(n - 1).unwrap();
        for f in feats {
            for i in 0..dim {
                let di = f[i] - mean[i];
                for j in 0..dim {
                    cov[[i, j]] += di * (f[j] - mean[j]) / denom;
                }
            }
        }
    }
    (mean, cov)
}

/// Fréchet distance between the Gaussian statistics of two feature sets.
///
/// Covariances are ridge-regularized when a set is too small for a
/// nonsingular estimate.
pub fn frechet_distance<F: Real>(feats_a: &[Vec<F>], feats_b: &[Vec<F>]) -> Result<F> {
    if feats_a.is_empty() || feats_b.is_empty() {
        return Err(Error::Parameter("frechet distance needs nonempty feature sets".into()));
    }
    let dim = feats_a[0].len();
    if dim == 0 {
        return Err(Error::Parameter("zero-dimensional features".into()));
    }
    for f in feats_a.iter().chain(feats_b) {
        if f.len() != dim {
            return Err(Error::Parameter("inconsistent feature dimensions".into()));
        }
    }
    let (mu_a, mut cov_a) = mean_and_cov(feats_a, dim);
    let (mu_b, mut cov_b) = mean_and_cov(feats_b, dim);
    if feats_a.len() <= dim || feats_b.len() <= dim {
        let ridge = F::from_f64(1e-6).unwrap();
        for i in 0..dim {
            cov_a[[i, i]] += ridge;
            cov_b[[i, i]] += ridge;
        }
    }
    let mean_term: F = mu_a
        .iter()
        .zip(&mu_b)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum();
    // tr((Σa Σb)^{1/2}) = tr((√Σa Σb √Σa)^{1/2}), which is symmetric PSD
    let sqrt_a = sqrtm_psd(&cov_a);
    let inner = sqrt_a.dot(&cov_b).dot(&sqrt_a);
    let sym = (&inner + &inner.t()).mapv(|v| v * F::from_f64(0.5).unwrap());
    let (eig, _) = jacobi_eigen(&sym);
    let tr_sqrt: F = eig.iter().map(|&l| l.max(F::zero()).sqrt()).sum();
    let tr_a: F = (0..dim).map(|i| cov_a[[i, i]]).sum();
    let tr_b: F = (0..dim).map(|i| cov_b[[i, i]]).sum();
    let two = F::from_f64(2.0).unwrap();
    Ok((mean_term + tr_a + tr_b - two * tr_sqrt).max(F::zero()))
}
