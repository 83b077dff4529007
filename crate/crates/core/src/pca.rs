//! PCA by singular value decomposition of the centered matrix, plus row
//! z-scoring. Centering subtracts the per-column mean (one value per data
//! column); what the op removes is exactly the `mean` field of the result.

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Mat;
use crate::real::{cast, Real};
use crate::stats;

/// Outcome of [`pca_reduce`].
#[derive(Clone, Debug)]
pub struct PcaResult<T = f64> {
    /// `k x v` reduced data, one retained direction per row.
    pub components: Mat<T>,
    /// `k x n` projection applied to the original observation axis; rows are
    /// orthonormal.
    pub basis: Mat<T>,
    /// Per-column mean removed before the decomposition, length `v`.
    pub mean: Vec<T>,
    /// Top-k squared singular values divided by `v - 1`, non-increasing.
    pub explained_variance: Vec<T>,
}

impl<T: Real> PcaResult<T> {
    /// `basis^T * components + mean`, the rank-k approximation of the input.
    pub fn reconstruct(&self) -> Mat<T> {
        let mut out = self.basis.transpose().matmul(&self.components);
        for r in 0..out.rows() {
            let row = out.row_mut(r);
            for (j, x) in row.iter_mut().enumerate() {
                *x = *x + self.mean[j];
            }
        }
        out
    }
}

/// Reduce an `n x v` matrix to its top-`k` principal directions.
pub fn pca_reduce<T: Real>(x: &Mat<T>, k: usize) -> Result<PcaResult<T>> {
    let (n, v) = (x.rows(), x.cols());
    if k == 0 || k > n.min(v) {
        return Err(Error::Domain(format!(
            "target order {k} out of range 1..={}",
            n.min(v)
        )));
    }
    x.validate_finite()?;

    let mut xc = x.clone();
    let mut mean = vec![T::zero(); v];
    let ninv = T::one() / cast::<T>(n as f64);
    for r in 0..n {
        for (j, &val) in x.row(r).iter().enumerate() {
            mean[j] = mean[j] + val;
        }
    }
    for m in mean.iter_mut() {
        *m = *m * ninv;
    }
    for r in 0..n {
        let row = xc.row_mut(r);
        for (j, val) in row.iter_mut().enumerate() {
            *val = *val - mean[j];
        }
    }

    let (svals, left) = if n <= v {
        linalg::svd_left_of_wide(&xc)
    } else {
        // Tall case: singular values come from the transpose; left vectors
        // are recovered by projection and completed deterministically where
        // the spectrum has collapsed to zero.
        let (svals, right) = linalg::svd_left_of_wide(&xc.transpose());
        let mut left = Mat::zeros(v.min(n), n);
        let tol = svals[0] * cast::<T>(1e-12);
        for i in 0..svals.len() {
            if svals[i] > tol {
                let dir = right.row(i);
                let col = left.row_mut(i);
                for r in 0..n {
                    let mut acc = T::zero();
                    for j in 0..v {
                        acc = acc + xc[(r, j)] * dir[j];
                    }
                    col[r] = acc / svals[i];
                }
            } else {
                complete_orthonormal(&mut left, i);
            }
        }
        (svals, left)
    };

    let mut basis = Mat::zeros(k, n);
    for i in 0..k {
        basis.row_mut(i).copy_from_slice(left.row(i));
        // Deterministic sign: largest-magnitude entry positive.
        let row = basis.row(i);
        let mut arg = 0usize;
        for (j, &val) in row.iter().enumerate() {
            if val.abs() > row[arg].abs() {
                arg = j;
            }
        }
        if basis[(i, arg)] < T::zero() {
            basis.negate_row(i);
        }
    }

    let components = basis.matmul(&xc);
    let denom = cast::<T>(v as f64 - 1.0);
    let explained_variance = svals[..k].iter().map(|&s| s * s / denom).collect();

    Ok(PcaResult { components, basis, mean, explained_variance })
}

/// Fill row `i` with a unit vector orthonormal to rows `0..i`.
fn complete_orthonormal<T: Real>(m: &mut Mat<T>, i: usize) {
    let n = m.cols();
    for candidate in 0..n {
        let mut v = vec![T::zero(); n];
        v[candidate] = T::one();
        for prev in 0..i {
            let p = m.row(prev);
            let dot = (0..n).fold(T::zero(), |s, j| s + v[j] * p[j]);
            for j in 0..n {
                v[j] = v[j] - dot * p[j];
            }
        }
        let norm = (0..n).fold(T::zero(), |s, j| s + v[j] * v[j]).sqrt();
        if norm > cast(1e-6) {
            for (j, val) in v.iter().enumerate() {
                m[(i, j)] = *val / norm;
            }
            return;
        }
    }
    unreachable!("no orthonormal completion found");
}

/// Standardize each row to mean 0 and sample standard deviation 1.
pub fn zscore_rows<T: Real>(x: &Mat<T>) -> Result<Mat<T>> {
    let mut out = x.clone();
    for r in 0..x.rows() {
        let m = stats::mean(x.row(r));
        let sd = stats::sample_std(x.row(r));
        if sd == T::zero() || !sd.is_finite() {
            return Err(Error::ConstantRow(r));
        }
        for val in out.row_mut(r) {
            *val = (*val - m) / sd;
        }
    }
    Ok(out)
}
