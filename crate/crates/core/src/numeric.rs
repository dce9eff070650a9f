//! Small dense linear algebra and the global tolerance policy.

use nalgebra::{DMatrix, DVector, Dim, Matrix, SMatrix, Storage};

use crate::{Error, Result};

/// Relative/absolute tolerance pair used by every approximate comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self> {
        if rel > 0.0 && abs > 0.0 && rel.is_finite() && abs.is_finite() {
            Ok(Tolerance { rel, abs })
        } else {
            Err(Error::InvalidTolerance)
        }
    }

    /// `|value| <= abs + rel * scale`.
    pub fn accepts(&self, value: f64, scale: f64) -> bool {
        value.abs() <= self.abs + self.rel * scale.abs()
    }
}

/// Elementwise max-abs norm.
pub fn max_norm<R: Dim, C: Dim, S: Storage<f64, R, C>>(m: &Matrix<f64, R, C, S>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// `‖a − b‖ ≤ abs + rel·max(‖a‖, ‖b‖)` in the elementwise max norm.
pub fn approx_eq<R1, C1, S1, R2, C2, S2>(
    a: &Matrix<f64, R1, C1, S1>,
    b: &Matrix<f64, R2, C2, S2>,
    tol: Tolerance,
) -> Result<bool>
where
    R1: Dim,
    C1: Dim,
    S1: Storage<f64, R1, C1>,
    R2: Dim,
    C2: Dim,
    S2: Storage<f64, R2, C2>,
{
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch { left: a.shape(), right: b.shape() });
    }
    let diff = a.iter().zip(b.iter()).fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()));
    let scale = max_norm(a).max(max_norm(b));
    Ok(diff <= tol.abs + tol.rel * scale)
}

/// Singular values of a dense matrix, largest first.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with the threshold `tol.rel · σ_max` (plus `tol.abs`).
pub fn rank(m: &DMatrix<f64>, tol: Tolerance) -> usize {
    let s = singular_values(m);
    let smax = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| x > tol.rel * smax && x > tol.abs).count()
}

/// Orthonormal basis of the numerical null space of `m`.
///
/// Right singular vectors whose singular value is at most `tol.rel · σ_max`
/// are returned. A zero matrix has every direction in its null space.
pub fn null_space(m: &DMatrix<f64>, tol: Tolerance) -> Vec<DVector<f64>> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Vec::new();
    }
    // pad with zero rows so the thin SVD yields a full set of right vectors
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().fold(0.0_f64, |a, &x| a.max(x));
    let threshold = tol.rel * smax;
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| smax == 0.0 || s <= threshold)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect()
}

/// Condition number estimate `σ_max / σ_min` (infinite when singular).
pub fn condition(m: &DMatrix<f64>) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Inverse at the default tolerance.
pub fn invert(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    invert_with(m, Tolerance::default())
}

/// Inverse; fails when the condition estimate exceeds `1 / tol.rel`.
pub fn invert_with(m: &DMatrix<f64>, tol: Tolerance) -> Result<DMatrix<f64>> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch { left: m.shape(), right: (m.ncols(), m.nrows()) });
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("matrix"));
    }
    let cond = condition(m);
    if !(cond <= 1.0 / tol.rel) {
        return Err(Error::SingularMatrix { condition: cond });
    }
    m.clone().try_inverse().ok_or(Error::SingularMatrix { condition: cond })
}

/// Fixed-size wrapper around [`invert`].
pub fn invert_fixed<const N: usize>(m: &SMatrix<f64, N, N>) -> Result<SMatrix<f64, N, N>> {
    let d = DMatrix::from_column_slice(N, N, m.as_slice());
    let inv = invert(&d)?;
    Ok(SMatrix::<f64, N, N>::from_column_slice(inv.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Matrix5;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn null_space_of_zero_matrix_is_everything() {
        let ns = null_space(&DMatrix::zeros(3, 3), Tolerance::default());
        assert_eq!(ns.len(), 3);
    }

    #[test]
    fn null_space_of_identity_is_empty() {
        assert!(null_space(&DMatrix::identity(4, 4), Tolerance::default()).is_empty());
    }

    #[test]
    fn null_space_of_rank_three_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut m = DMatrix::<f64>::zeros(5, 5);
        for _ in 0..3 {
            let u = DVector::from_fn(5, |_, _| rng.random_range(-1.0..1.0));
            let v = DVector::from_fn(5, |_, _| rng.random_range(-1.0..1.0));
            m += &u * v.transpose();
        }
        let ns = null_space(&m, Tolerance::default());
        assert_eq!(ns.len(), 2);
        for (i, a) in ns.iter().enumerate() {
            assert!((&m * a).norm() < 1e-9);
            for (j, b) in ns.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((a.dot(b) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn null_space_of_wide_matrix() {
        // 1x3: null space is the plane orthogonal to the row
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = null_space(&m, Tolerance::default());
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((v[0] + v[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn invert_identity_and_diagonal() {
        let id = DMatrix::<f64>::identity(5, 5);
        assert_eq!(invert(&id).unwrap(), id);
        let d = Matrix5::from_diagonal(&nalgebra::Vector5::new(2.0, -1.0, 1.0, 1.0, 3.0));
        let inv = invert_fixed(&d).unwrap();
        let expect = Matrix5::from_diagonal(&nalgebra::Vector5::new(0.5, -1.0, 1.0, 1.0, 1.0 / 3.0));
        assert!(approx_eq(&inv, &expect, Tolerance::default()).unwrap());
    }

    #[test]
    fn invert_random_well_conditioned() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = Matrix5::from_fn(|i, j| if i == j { 3.0 } else { 0.0 } + rng.random_range(-0.5..0.5));
        let inv = invert_fixed(&m).unwrap();
        assert!(max_norm(&(m * inv - Matrix5::identity())) < 1e-12);
    }

    #[test]
    fn invert_rejects_singular_and_non_square() {
        let mut m = DMatrix::<f64>::identity(3, 3);
        m[(2, 2)] = 0.0;
        assert!(matches!(invert(&m), Err(Error::SingularMatrix { .. })));
        assert!(matches!(invert(&DMatrix::<f64>::zeros(2, 3)), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn approx_eq_cases() {
        let tol = Tolerance::default();
        let x = Matrix5::from_fn(|i, j| ((i * 5 + j) as f64).sin());
        let x = x / max_norm(&x);
        assert!(approx_eq(&x, &x, tol).unwrap());
        assert!(approx_eq(&x, &x.add_scalar(1e-15), tol).unwrap());
        assert!(!approx_eq(&x, &x.add_scalar(1.0), tol).unwrap());
        let small = DMatrix::<f64>::zeros(2, 2);
        let big = DMatrix::<f64>::zeros(3, 2);
        assert!(matches!(approx_eq(&small, &big, tol), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(Tolerance::new(0.0, 1e-12).is_err());
        assert!(Tolerance::new(1e-9, -1.0).is_err());
        assert!(Tolerance::new(1e-6, 1e-9).is_ok());
    }

    proptest! {
        #[test]
        fn double_inverse_is_identity(entries in proptest::collection::vec(-0.4f64..0.4, 25)) {
            let m = Matrix5::from_iterator(entries) + Matrix5::identity() * 2.0;
            let back = invert_fixed(&invert_fixed(&m).unwrap()).unwrap();
            prop_assert!(approx_eq(&back, &m, Tolerance::default()).unwrap());
        }
    }
}
