//! The joint likelihood: logistic marginals per component, a Gaussian copula
//! linking component `i` of modality 1 with component `i` of modality 2, and
//! the log-determinant terms of the two unmixing matrices. The analytic
//! gradient chains through `y -> u = F(y) -> z = inv_Phi(u)` and treats the
//! u-clamp as a stop-gradient region.

use crate::error::{Error, Result};
use crate::linalg::Lu;
use crate::matrix::Mat;
use crate::real::{cast, compensated_sum, Real};
use crate::special::{std_normal_inv_cdf_unchecked, std_normal_pdf};
use rayon::prelude::*;

/// Clamp applied to marginal CDF values before the inverse normal CDF.
pub const U_CLAMP: f64 = 1e-7;

/// Columns per work unit; fixed so that parallel evaluation reduces in a
/// thread-count-independent order.
const CHUNK: usize = 512;

/// Logistic marginal with zero location.
#[derive(Clone, Copy, Debug)]
pub struct MarginalModel<T = f64> {
    /// Scale parameter, strictly positive. Location is fixed at zero.
    pub scale: T,
}

impl<T: Real> Default for MarginalModel<T> {
    fn default() -> Self {
        MarginalModel { scale: T::one() }
    }
}

impl<T: Real> MarginalModel<T> {
    pub fn new(scale: T) -> Result<Self> {
        if !(scale > T::zero()) {
            return Err(Error::Domain(format!("marginal scale {scale} must be positive")));
        }
        Ok(MarginalModel { scale })
    }
}

/// Per-pair dependency parameters and the implied correlation structure.
#[derive(Clone, Debug)]
pub struct CopulaSpec<T = f64> {
    sigma: Vec<T>,
}

impl<T: Real> CopulaSpec<T> {
    /// One dependency parameter per component pair; each must satisfy
    /// `|sigma| <= 1`.
    pub fn new(sigma: Vec<T>) -> Result<Self> {
        if sigma.is_empty() {
            return Err(Error::Domain("copula spec needs at least one component".into()));
        }
        for (i, &s) in sigma.iter().enumerate() {
            if !(s.abs() <= T::one()) {
                return Err(Error::Domain(format!("|sigma[{i}]| = {} exceeds 1", s.abs())));
            }
        }
        Ok(CopulaSpec { sigma })
    }

    pub fn uniform(order: usize, sigma: T) -> Result<Self> {
        Self::new(vec![sigma; order])
    }

    /// Model order `c`.
    pub fn order(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[T] {
        &self.sigma
    }

    /// The full `2c x 2c` correlation matrix: unit diagonal, `sigma[i]` at
    /// `(i, i+c)` and `(i+c, i)`, zero elsewhere.
    pub fn full_correlation(&self) -> Mat<T> {
        let c = self.order();
        let mut r = Mat::identity(2 * c);
        for (i, &s) in self.sigma.iter().enumerate() {
            r[(i, i + c)] = s;
            r[(i + c, i)] = s;
        }
        r
    }
}

/// The assembled negative log-likelihood and its three log-likelihood parts:
/// `total = -(marginal_term + copula_term + logdet_term)`.
#[derive(Clone, Copy, Debug)]
pub struct NllBreakdown<T = f64> {
    pub total: T,
    pub marginal_term: T,
    pub copula_term: T,
    pub logdet_term: T,
}

/// Log density of the zero-location logistic distribution, computed in an
/// overflow-free form that survives `|y/s|` up to 700 and beyond.
pub fn logistic_log_pdf<T: Real>(y: T, m: &MarginalModel<T>) -> T {
    let a = (y / m.scale).abs();
    let two = cast::<T>(2.0);
    -a - m.scale.ln() - two * (-a).exp().ln_1p()
}

/// Logistic CDF clamped to `[1e-7, 1 - 1e-7]`, ready for the inverse normal
/// transform.
pub fn logistic_cdf<T: Real>(y: T, m: &MarginalModel<T>) -> T {
    let lo = cast::<T>(U_CLAMP);
    let hi = T::one() - lo;
    logistic_cdf_raw(y, m).max(lo).min(hi)
}

#[inline]
fn logistic_cdf_raw<T: Real>(y: T, m: &MarginalModel<T>) -> T {
    T::one() / (T::one() + (-y / m.scale).exp())
}

/// Log density of the bivariate Gaussian copula at `(u1, u2)` with pair
/// correlation `sigma`. Identically zero when `sigma == 0`.
pub fn gaussian_copula_log_density<T: Real>(u1: T, u2: T, sigma: T) -> Result<T> {
    if sigma.abs() >= T::one() {
        return Err(Error::DegenerateCopula);
    }
    if !(u1 > T::zero() && u1 < T::one() && u2 > T::zero() && u2 < T::one()) {
        return Err(Error::Domain(format!("copula arguments ({u1}, {u2}) not in (0, 1)")));
    }
    if sigma == T::zero() {
        return Ok(T::zero());
    }
    let z1 = std_normal_inv_cdf_unchecked(u1);
    let z2 = std_normal_inv_cdf_unchecked(u2);
    Ok(pair_log_density(z1, z2, sigma))
}

#[inline]
fn pair_log_density<T: Real>(z1: T, z2: T, sigma: T) -> T {
    let one = T::one();
    let half = cast::<T>(0.5);
    let s2 = sigma * sigma;
    let det = one - s2;
    -half * det.ln() - (s2 * (z1 * z1 + z2 * z2) - (sigma + sigma) * z1 * z2) / (det + det)
}

fn check_shapes<T: Real>(
    w1: &Mat<T>,
    w2: &Mat<T>,
    x1: &Mat<T>,
    x2: &Mat<T>,
    spec: &CopulaSpec<T>,
) -> Result<usize> {
    let c = spec.order();
    let ok = w1.rows() == c
        && w1.cols() == c
        && w2.rows() == c
        && w2.cols() == c
        && x1.rows() == c
        && x2.rows() == c
        && x1.cols() == x2.cols()
        && x1.cols() >= 1;
    if !ok {
        return Err(Error::ShapeMismatch(format!(
            "w1 {}x{}, w2 {}x{}, x1 {}x{}, x2 {}x{}, order {c}",
            w1.rows(),
            w1.cols(),
            w2.rows(),
            w2.cols(),
            x1.rows(),
            x1.cols(),
            x2.rows(),
            x2.cols()
        )));
    }
    Ok(x1.cols())
}

/// Negative log-likelihood of a batch of voxel columns, with the three
/// contributions reported separately. The log-det contribution is scaled by
/// the batch size so that mini-batch values are unbiased estimates of the
/// full-data loss.
pub fn joint_nll<T: Real>(
    w1: &Mat<T>,
    w2: &Mat<T>,
    x1: &Mat<T>,
    x2: &Mat<T>,
    spec: &CopulaSpec<T>,
    m: &MarginalModel<T>,
) -> Result<NllBreakdown<T>> {
    let b = check_shapes(w1, w2, x1, x2, spec)?;
    let c = spec.order();
    let ld1 = Lu::factor(w1)?.log_abs_det();
    let ld2 = Lu::factor(w2)?.log_abs_det();
    let y1 = w1.matmul(x1);
    let y2 = w2.matmul(x2);

    let lo = cast::<T>(U_CLAMP);
    let hi = T::one() - lo;
    let chunk_bounds: Vec<(usize, usize)> =
        (0..b).step_by(CHUNK).map(|s| (s, (s + CHUNK).min(b))).collect();
    let partials: Vec<(T, T)> = chunk_bounds
        .par_iter()
        .map(|&(start, end)| {
            let mut marg = T::zero();
            let mut cop = T::zero();
            for j in start..end {
                for i in 0..c {
                    let a = y1[(i, j)];
                    let bb = y2[(i, j)];
                    marg = marg + logistic_log_pdf(a, m) + logistic_log_pdf(bb, m);
                    let sigma = spec.sigma()[i];
                    if sigma != T::zero() {
                        let u1 = logistic_cdf_raw(a, m).max(lo).min(hi);
                        let u2 = logistic_cdf_raw(bb, m).max(lo).min(hi);
                        let z1 = std_normal_inv_cdf_unchecked(u1);
                        let z2 = std_normal_inv_cdf_unchecked(u2);
                        cop = cop + pair_log_density(z1, z2, sigma);
                    }
                }
            }
            (marg, cop)
        })
        .collect();

    let marginal_term = compensated_sum(partials.iter().map(|p| p.0));
    let copula_term = compensated_sum(partials.iter().map(|p| p.1));
    let logdet_term = cast::<T>(b as f64) * (ld1 + ld2);
    Ok(NllBreakdown {
        total: -(marginal_term + copula_term + logdet_term),
        marginal_term,
        copula_term,
        logdet_term,
    })
}

/// Analytic gradient of [`joint_nll`]'s `total` with respect to both
/// unmixing matrices.
pub fn nll_gradient<T: Real>(
    w1: &Mat<T>,
    w2: &Mat<T>,
    x1: &Mat<T>,
    x2: &Mat<T>,
    spec: &CopulaSpec<T>,
    m: &MarginalModel<T>,
) -> Result<(Mat<T>, Mat<T>)> {
    let b = check_shapes(w1, w2, x1, x2, spec)?;
    let c = spec.order();
    let w1_inv_t = Lu::factor(w1)?.inverse().transpose();
    let w2_inv_t = Lu::factor(w2)?.inverse().transpose();
    let y1 = w1.matmul(x1);
    let y2 = w2.matmul(x2);

    let lo = cast::<T>(U_CLAMP);
    let hi = T::one() - lo;
    let one = T::one();
    let two = cast::<T>(2.0);
    let s = m.scale;

    let chunk_bounds: Vec<(usize, usize)> =
        (0..b).step_by(CHUNK).map(|s0| (s0, (s0 + CHUNK).min(b))).collect();
    // Per-chunk score matrices D (c x chunk) folded into G = D * x^T partials.
    let partials: Vec<(Mat<T>, Mat<T>)> = chunk_bounds
        .par_iter()
        .map(|&(start, end)| {
            let mut g1 = Mat::zeros(c, c);
            let mut g2 = Mat::zeros(c, c);
            for j in start..end {
                for i in 0..c {
                    let sigma = spec.sigma()[i];
                    let ya = y1[(i, j)];
                    let yb = y2[(i, j)];
                    let ua = logistic_cdf_raw(ya, m);
                    let ub = logistic_cdf_raw(yb, m);
                    // Marginal score of the negative log-likelihood.
                    let mut da = (two * ua - one) / s;
                    let mut db = (two * ub - one) / s;
                    if sigma != T::zero() {
                        let uac = ua.max(lo).min(hi);
                        let ubc = ub.max(lo).min(hi);
                        let za = std_normal_inv_cdf_unchecked(uac);
                        let zb = std_normal_inv_cdf_unchecked(ubc);
                        let det = one - sigma * sigma;
                        // dz/dy = logistic pdf / normal pdf; zero in the
                        // clamped (stop-gradient) region.
                        if ua > lo && ua < hi {
                            let dz = ua * (one - ua) / (s * std_normal_pdf(za));
                            da = da + sigma * (sigma * za - zb) / det * dz;
                        }
                        if ub > lo && ub < hi {
                            let dz = ub * (one - ub) / (s * std_normal_pdf(zb));
                            db = db + sigma * (sigma * zb - za) / det * dz;
                        }
                    }
                    for k in 0..c {
                        let xa = x1[(k, j)];
                        let xb = x2[(k, j)];
                        g1[(i, k)] = g1[(i, k)] + da * xa;
                        g2[(i, k)] = g2[(i, k)] + db * xb;
                    }
                }
            }
            (g1, g2)
        })
        .collect();

    let mut grad1 = Mat::zeros(c, c);
    let mut grad2 = Mat::zeros(c, c);
    for (p1, p2) in &partials {
        grad1 = grad1.add(p1);
        grad2 = grad2.add(p2);
    }
    let bt = cast::<T>(b as f64);
    grad1 = grad1.sub(&w1_inv_t.scale(bt));
    grad2 = grad2.sub(&w2_inv_t.scale(bt));
    Ok((grad1, grad2))
}
