//! Basic sample statistics. Variances and standard deviations use the
//! sample (n-1) denominator throughout; skewness uses population moments.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::real::{cast, Real};

pub fn mean<T: Real>(a: &[T]) -> T {
    let n = cast::<T>(a.len() as f64);
    a.iter().copied().sum::<T>() / n
}

/// Sample variance with the (n-1) denominator.
pub fn sample_var<T: Real>(a: &[T]) -> T {
    let m = mean(a);
    let n1: T = cast(a.len() as f64 - 1.0);
    a.iter().map(|&x| (x - m) * (x - m)).sum::<T>() / n1
}

pub fn sample_std<T: Real>(a: &[T]) -> T {
    sample_var(a).sqrt()
}

/// Pearson correlation of two equal-length vectors.
pub fn pearson_corr<T: Real>(a: &[T], b: &[T]) -> Result<T> {
    if a.len() != b.len() || a.len() < 3 {
        return Err(Error::ShapeMismatch(format!(
            "pearson_corr needs equal lengths >= 3, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let ma = mean(a);
    let mb = mean(b);
    let mut sab = T::zero();
    let mut saa = T::zero();
    let mut sbb = T::zero();
    for i in 0..a.len() {
        let da = a[i] - ma;
        let db = b[i] - mb;
        sab = sab + da * db;
        saa = saa + da * da;
        sbb = sbb + db * db;
    }
    if saa == T::zero() || sbb == T::zero() {
        return Err(Error::ZeroVariance("pearson_corr input".into()));
    }
    Ok(sab / (saa * sbb).sqrt())
}

/// Standardized third central moment (population form).
pub fn skewness<T: Real>(a: &[T]) -> Result<T> {
    if a.len() < 3 {
        return Err(Error::ShapeMismatch("skewness needs length >= 3".into()));
    }
    let m = mean(a);
    let n = cast::<T>(a.len() as f64);
    let mut m2 = T::zero();
    let mut m3 = T::zero();
    for &x in a {
        let d = x - m;
        m2 = m2 + d * d;
        m3 = m3 + d * d * d;
    }
    m2 = m2 / n;
    m3 = m3 / n;
    if m2 == T::zero() {
        return Err(Error::ZeroVariance("skewness input".into()));
    }
    Ok(m3 / m2.powf(cast(1.5)))
}

/// Absolute Pearson correlation between every row of `a` and every row of
/// `b`. Zero-variance rows produce zero similarity instead of an error; the
/// callers that care (alignment, clustering) treat those rows separately.
pub fn abs_row_corr_matrix<T: Real>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    assert_eq!(a.cols(), b.cols(), "row correlation needs equal column counts");
    let mut out = Mat::zeros(a.rows(), b.rows());
    for i in 0..a.rows() {
        for j in 0..b.rows() {
            let r = pearson_corr(a.row(i), b.row(j)).unwrap_or(T::zero());
            out[(i, j)] = r.abs();
        }
    }
    out
}

/// Signed version of [`abs_row_corr_matrix`].
pub fn row_corr_matrix<T: Real>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    assert_eq!(a.cols(), b.cols());
    let mut out = Mat::zeros(a.rows(), b.rows());
    for i in 0..a.rows() {
        for j in 0..b.rows() {
            out[(i, j)] = pearson_corr(a.row(i), b.row(j)).unwrap_or(T::zero());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::Distribution;

    #[test]
    fn pearson_self_is_one() {
        let a = [1.0, 2.0, 3.0, 5.0];
        assert!((pearson_corr(&a, &a).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pearson_reversed_is_minus_one() {
        let a = [1.0, 2.0, 3.0];
        let b = [3.0, 2.0, 1.0];
        assert!((pearson_corr(&a, &b).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pearson_orthogonal_zero_mean() {
        let a = [1.0, -1.0, 1.0, -1.0];
        let b = [1.0, 1.0, -1.0, -1.0];
        assert_eq!(pearson_corr(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn pearson_shift_scale_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a: Vec<f64> =
            (0..50).map(|_| rand_distr::StandardNormal.sample(&mut rng)).collect();
        let b: Vec<f64> =
            (0..50).map(|_| rand_distr::StandardNormal.sample(&mut rng)).collect();
        let r0 = pearson_corr(&a, &b).unwrap();
        for &(alpha, beta) in &[(2.5, 1.0), (-0.7, -4.0), (0.001, 100.0)] {
            let b2: Vec<f64> = b.iter().map(|&x| alpha * x + beta).collect();
            let r = pearson_corr(&a, &b2).unwrap();
            let want = if alpha > 0.0 { r0 } else { -r0 };
            assert!((r - want).abs() < 1e-12);
        }
    }

    #[test]
    fn pearson_zero_variance_errors() {
        let a = [1.0, 1.0, 1.0];
        let b = [1.0, 2.0, 3.0];
        assert!(pearson_corr(&a, &b).is_err());
    }

    #[test]
    fn skewness_symmetric_is_zero() {
        assert_eq!(skewness(&[-1.0, 0.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn skewness_is_odd() {
        let a = [0.1, 0.4, 2.0, -1.0, 0.3, 7.0];
        let neg: Vec<f64> = a.iter().map(|&x| -x).collect();
        let s1 = skewness(&a).unwrap();
        let s2 = skewness(&neg).unwrap();
        assert!((s1 + s2).abs() < 1e-12);
    }

    #[test]
    fn skewness_lognormal_sample_positive() {
        // Population skewness of exp(N(0,1)) is (e + 2) sqrt(e - 1) ~ 6.18;
        // a seeded n = 10000 sample comfortably exceeds 1.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let a: Vec<f64> = (0..10_000)
            .map(|_| {
                let z: f64 = rand_distr::StandardNormal.sample(&mut rng);
                z.exp()
            })
            .collect();
        assert!(skewness(&a).unwrap() > 1.0);
    }
}
