//! Dense kernels: LU with partial pivoting, Householder QR, and a one-sided
//! Jacobi SVD. Everything here works on the small side of the data (model
//! order or observation count), so plain loops are fine.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::real::{cast, Real};

const PIVOT_FLOOR: f64 = 1e-300;

/// LU factorization with partial pivoting of a square matrix.
pub struct Lu<T> {
    lu: Mat<T>,
    perm: Vec<usize>,
    sign_flips: usize,
}

impl<T: Real> Lu<T> {
    pub fn factor(m: &Mat<T>) -> Result<Self> {
        assert_eq!(m.rows(), m.cols(), "LU expects a square matrix");
        let n = m.rows();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign_flips = 0usize;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].abs();
            for i in k + 1..n {
                let v = lu[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best < cast(PIVOT_FLOOR) {
                return Err(Error::SingularMatrix);
            }
            if p != k {
                lu.swap_rows(p, k);
                perm.swap(p, k);
                sign_flips += 1;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let sub = f * lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - sub;
                }
            }
        }
        Ok(Lu { lu, perm, sign_flips })
    }

    pub fn log_abs_det(&self) -> T {
        let n = self.lu.rows();
        (0..n).map(|i| self.lu[(i, i)].abs().ln()).sum()
    }

    pub fn det_sign(&self) -> T {
        let n = self.lu.rows();
        let mut s = if self.sign_flips % 2 == 0 { T::one() } else { -T::one() };
        for i in 0..n {
            if self.lu[(i, i)] < T::zero() {
                s = -s;
            }
        }
        s
    }

    pub fn solve_vec(&self, b: &[T]) -> Vec<T> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> Mat<T> {
        let n = self.lu.rows();
        let mut out = Mat::zeros(n, n);
        let mut e = vec![T::zero(); n];
        for c in 0..n {
            e[c] = T::one();
            let x = self.solve_vec(&e);
            e[c] = T::zero();
            for r in 0..n {
                out[(r, c)] = x[r];
            }
        }
        out
    }
}

/// `log |det W|` of a square matrix via LU.
pub fn log_abs_det<T: Real>(w: &Mat<T>) -> Result<T> {
    Ok(Lu::factor(w)?.log_abs_det())
}

/// Thin Q factor of a square matrix, by Householder reflections.
///
/// Columns of the result are orthonormal to machine precision regardless of
/// the conditioning of the input.
pub fn qr_q<T: Real>(a: &Mat<T>) -> Mat<T> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "qr_q expects square input");
    let mut r = a.clone();
    // Store reflectors v_k in the zeroed-out part plus a separate head list.
    let mut heads: Vec<T> = Vec::with_capacity(n);
    for k in 0..n {
        let mut norm2 = T::zero();
        for i in k..n {
            norm2 = norm2 + r[(i, k)] * r[(i, k)];
        }
        let norm = norm2.sqrt();
        let x0 = r[(k, k)];
        let alpha = if x0 >= T::zero() { -norm } else { norm };
        let v0 = x0 - alpha;
        heads.push(v0);
        if norm == T::zero() {
            continue;
        }
        // v = [v0, x_{k+1..}]; apply H = I - 2 v v^T / (v^T v) to trailing cols
        let mut vnorm2 = v0 * v0;
        for i in k + 1..n {
            vnorm2 = vnorm2 + r[(i, k)] * r[(i, k)];
        }
        if vnorm2 == T::zero() {
            r[(k, k)] = alpha;
            continue;
        }
        for j in k + 1..n {
            let mut dot = v0 * r[(k, j)];
            for i in k + 1..n {
                dot = dot + r[(i, k)] * r[(i, j)];
            }
            let f = (dot + dot) / vnorm2;
            r[(k, j)] = r[(k, j)] - f * v0;
            for i in k + 1..n {
                let sub = f * r[(i, k)];
                r[(i, j)] = r[(i, j)] - sub;
            }
        }
        r[(k, k)] = alpha;
    }
    // Accumulate Q = H_0 H_1 ... H_{n-1} applied to I.
    let mut q = Mat::identity(n);
    for k in (0..n).rev() {
        let v0 = heads[k];
        let mut vnorm2 = v0 * v0;
        for i in k + 1..n {
            vnorm2 = vnorm2 + r[(i, k)] * r[(i, k)];
        }
        if vnorm2 == T::zero() {
            continue;
        }
        for j in 0..n {
            let mut dot = v0 * q[(k, j)];
            for i in k + 1..n {
                dot = dot + r[(i, k)] * q[(i, j)];
            }
            let f = (dot + dot) / vnorm2;
            q[(k, j)] = q[(k, j)] - f * v0;
            for i in k + 1..n {
                let sub = f * r[(i, k)];
                q[(i, j)] = q[(i, j)] - sub;
            }
        }
    }
    q
}

/// R factor of the QR factorization of `a^T`, where the columns of `a^T` are
/// the rows of `a`. Rows of `a` are contiguous, so the reflector sweeps run
/// over cache-friendly slices. Requires `a.cols() >= a.rows()`.
pub fn qr_r_of_rows<T: Real>(a: &Mat<T>) -> Mat<T> {
    let n = a.rows(); // columns of the implicit matrix
    let m = a.cols(); // rows of the implicit matrix
    assert!(m >= n, "qr_r_of_rows expects a wide input (cols >= rows)");
    let mut w = a.clone(); // row j of w = implicit column j
    let mut r = Mat::zeros(n, n);
    for k in 0..n {
        let (norm, x0) = {
            let col = &w.row(k)[k..];
            let norm2 = col.iter().fold(T::zero(), |s, &x| s + x * x);
            (norm2.sqrt(), col[0])
        };
        let alpha = if x0 >= T::zero() { -norm } else { norm };
        let v0 = x0 - alpha;
        let vnorm2 = {
            let col = &w.row(k)[k + 1..];
            v0 * v0 + col.iter().fold(T::zero(), |s, &x| s + x * x)
        };
        if vnorm2 > T::zero() {
            for j in k + 1..n {
                // dot = v . col_j over entries k..m
                let (head, tail) = w.data_mut().split_at_mut((k + 1) * m);
                let vk = &head[k * m..k * m + m];
                let cj = &mut tail[(j - k - 1) * m..(j - k - 1) * m + m];
                let mut dot = v0 * cj[k];
                for i in k + 1..m {
                    dot = dot + vk[i] * cj[i];
                }
                let f = (dot + dot) / vnorm2;
                cj[k] = cj[k] - f * v0;
                for i in k + 1..m {
                    let sub = f * vk[i];
                    cj[i] = cj[i] - sub;
                }
            }
        }
        w.row_mut(k)[k] = alpha;
        for j in k..n {
            r[(k, j)] = if j == k { alpha } else { w.row(j)[k] };
        }
    }
    r
}

/// Singular values and left singular vectors of a wide matrix (`rows <=
/// cols`), via Householder preconditioning followed by a one-sided Jacobi
/// sweep. The left vectors come from the accumulated rotations, so they are
/// orthonormal even for zero singular values.
///
/// Returns `(singular_values_desc, left)` with `left` `n x n`, column `i`
/// stored in row `i`.
pub fn svd_left_of_wide<T: Real>(a: &Mat<T>) -> (Vec<T>, Mat<T>) {
    let n = a.rows();
    let r = qr_r_of_rows(a); // n x n, a^T = Q r
    // One-sided Jacobi on the columns of r; rows of rt are those columns.
    let mut rt = r.transpose();
    let mut rot = Mat::<T>::identity(n); // row i = accumulated rotation column i
    let eps = T::epsilon() * cast(64.0);
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (app, aqq, apq) = {
                    let rp = rt.row(p);
                    let rq = rt.row(q);
                    let mut app = T::zero();
                    let mut aqq = T::zero();
                    let mut apq = T::zero();
                    for i in 0..n {
                        app = app + rp[i] * rp[i];
                        aqq = aqq + rq[i] * rq[i];
                        apq = apq + rp[i] * rq[i];
                    }
                    (app, aqq, apq)
                };
                if app == T::zero() || aqq == T::zero() {
                    continue;
                }
                if apq.abs() <= eps * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (apq + apq);
                let t = {
                    let s = if zeta >= T::zero() { T::one() } else { -T::one() };
                    s / (zeta.abs() + (T::one() + zeta * zeta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate_rows(&mut rt, p, q, c, s);
                rotate_rows(&mut rot, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut svals: Vec<T> = (0..n)
        .map(|i| rt.row(i).iter().fold(T::zero(), |sum, &x| sum + x * x).sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svals[j].partial_cmp(&svals[i]).unwrap());
    svals = order.iter().map(|&i| svals[i]).collect();
    (svals, rot.permute_rows(&order))
}

#[inline]
fn rotate_rows<T: Real>(m: &mut Mat<T>, p: usize, q: usize, c: T, s: T) {
    let cols = m.cols();
    let (lo, hi) = (p.min(q), p.max(q));
    let (head, tail) = m.data_mut().split_at_mut(hi * cols);
    let row_lo = &mut head[lo * cols..lo * cols + cols];
    let row_hi = &mut tail[..cols];
    // p < q always holds for callers, so row_lo is p.
    for i in 0..cols {
        let vp = row_lo[i];
        let vq = row_hi[i];
        row_lo[i] = c * vp - s * vq;
        row_hi[i] = s * vp + c * vq;
    }
}

/// Moore-Penrose pseudo-inverse of a wide full-row-rank matrix:
/// `pinv(G) = G^T (G G^T)^{-1}`. Errors if the Gram matrix is singular.
pub fn pinv_wide<T: Real>(g: &Mat<T>) -> Result<Mat<T>> {
    let gram = g.matmul_transpose(g);
    let inv = Lu::factor(&gram).map_err(|_| Error::RankDeficient)?.inverse();
    Ok(g.transpose().matmul(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Mat;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_mat(rows: usize, cols: usize, seed: u64) -> Mat<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..rows * cols)
            .map(|_| rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng))
            .collect();
        Mat::from_vec(rows, cols, data).unwrap()
    }

    #[test]
    fn log_abs_det_identity_is_zero() {
        assert_eq!(log_abs_det(&Mat::<f64>::identity(4)).unwrap(), 0.0);
    }

    #[test]
    fn log_abs_det_diag_2_half_is_zero() {
        let m = Mat::from_vec(2, 2, vec![2.0, 0.0, 0.0, 0.5]).unwrap();
        assert!(log_abs_det(&m).unwrap().abs() < 1e-15);
    }

    #[test]
    fn log_abs_det_diag_3_neg2() {
        let m = Mat::from_vec(2, 2, vec![3.0, 0.0, 0.0, -2.0]).unwrap();
        let got = log_abs_det(&m).unwrap();
        assert!((got - 6.0_f64.ln()).abs() < 1e-12, "got {got}");
        assert!((got - 1.791759).abs() < 1e-6);
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = Mat::from_vec(2, 2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(log_abs_det(&m), Err(Error::SingularMatrix)));
    }

    #[test]
    fn log_abs_det_is_additive_over_products() {
        for seed in 0..10 {
            let a = random_mat(10, 10, seed);
            let b = random_mat(10, 10, seed + 100);
            let la = log_abs_det(&a).unwrap();
            let lb = log_abs_det(&b).unwrap();
            let lab = log_abs_det(&a.matmul(&b)).unwrap();
            assert!((lab - la - lb).abs() < 1e-9, "seed {seed}: {lab} vs {}", la + lb);
        }
    }

    #[test]
    fn lu_solve_and_inverse() {
        let a = random_mat(6, 6, 3);
        let lu = Lu::factor(&a).unwrap();
        let inv = lu.inverse();
        let eye = a.matmul(&inv);
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((eye[(i, j)] - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn qr_q_is_orthonormal() {
        for seed in 0..5 {
            let a = random_mat(8, 8, seed);
            let q = qr_q(&a);
            let qtq = q.transpose().matmul(&q);
            let err = qtq.sub(&Mat::identity(8)).max_abs();
            assert!(err < 1e-12, "seed {seed}: {err}");
        }
    }

    #[test]
    fn svd_reconstructs_singular_values_of_diagonal() {
        // Implicit matrix columns are the rows: diag(3, 2, 1) padded wide.
        let mut a = Mat::<f64>::zeros(3, 5);
        a[(0, 0)] = 3.0;
        a[(1, 1)] = 2.0;
        a[(2, 2)] = 1.0;
        let (svals, left) = svd_left_of_wide(&a);
        assert!((svals[0] - 3.0).abs() < 1e-12);
        assert!((svals[1] - 2.0).abs() < 1e-12);
        assert!((svals[2] - 1.0).abs() < 1e-12);
        let ltl = left.matmul_transpose(&left);
        assert!(ltl.sub(&Mat::identity(3)).max_abs() < 1e-12);
    }

    #[test]
    fn svd_left_vectors_match_gram_eigexcept_sign() {
        // Cross-check singular values against sqrt of Gram eigenvalues for a
        // random case by verifying A A^T = L diag(s^2) L^T.
        let a = random_mat(6, 40, 9);
        let (svals, left) = svd_left_of_wide(&a);
        let gram = a.matmul_transpose(&a);
        // Reconstruct from the decomposition.
        let mut recon = Mat::<f64>::zeros(6, 6);
        for i in 0..6 {
            for j in 0..6 {
                let mut acc = 0.0;
                for k in 0..6 {
                    acc += left[(k, i)] * svals[k] * svals[k] * left[(k, j)];
                }
                recon[(i, j)] = acc;
            }
        }
        assert!(gram.sub(&recon).max_abs() < 1e-9);
    }

    #[test]
    fn pinv_of_orthonormal_rows_is_transpose() {
        let q = qr_q(&random_mat(4, 4, 5));
        let p = pinv_wide(&q).unwrap();
        assert!(p.sub(&q.transpose()).max_abs() < 1e-10);
    }
}
