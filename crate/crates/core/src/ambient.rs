//! The flat ambient space `(R^2m, P, G)`.
//!
//! `P` is a constant almost product structure and `G` a constant metric of
//! neutral signature. With a constant `P` the Levi-Civita connection is the
//! coordinate derivative and `P` is parallel, so every such space that passes
//! [`AmbientSpace::verify_structure`] is para-Kähler.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::linalg;
use crate::tolerances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AmbientError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbientSpace {
    m: usize,
    p: DMatrix<f64>,
    g: DMatrix<f64>,
}

/// Residuals of `P^2 = I`, `P^T G P = -G`, `G = G^T` and the signature of `G`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub dimension: usize,
    pub product_residual: f64,
    pub compatibility_residual: f64,
    pub symmetry_residual: f64,
    pub positive: usize,
    pub negative: usize,
    pub tolerance: f64,
    pub pass: bool,
}

impl AmbientSpace {
    /// `P e_i = e_{i+m}`, `P e_{i+m} = e_i`, `G = diag(+1 (m times), -1 (m times))`.
    pub fn canonical(m: usize) -> AmbientSpace {
        assert!(m >= 1, "canonical ambient needs m >= 1");
        let n = 2 * m;
        let mut p = DMatrix::zeros(n, n);
        let mut g = DMatrix::zeros(n, n);
        for i in 0..m {
            p[(i + m, i)] = 1.0;
            p[(i, i + m)] = 1.0;
            g[(i, i)] = 1.0;
            g[(i + m, i + m)] = -1.0;
        }
        AmbientSpace { m, p, g }
    }

    /// An explicit structure; only shapes are checked here, the algebraic
    /// identities are left to [`AmbientSpace::verify_structure`].
    pub fn from_matrices(p: DMatrix<f64>, g: DMatrix<f64>) -> Result<AmbientSpace, AmbientError> {
        let n = p.nrows();
        if p.ncols() != n || g.nrows() != n || g.ncols() != n {
            return Err(AmbientError::DimensionMismatch(format!(
                "P is {}x{}, G is {}x{}",
                p.nrows(),
                p.ncols(),
                g.nrows(),
                g.ncols()
            )));
        }
        if n == 0 || n % 2 != 0 {
            return Err(AmbientError::DimensionMismatch(format!(
                "ambient dimension {n} is not a positive even number"
            )));
        }
        Ok(AmbientSpace { m: n / 2, p, g })
    }

    pub fn half_dim(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        2 * self.m
    }

    pub fn structure(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn metric(&self) -> &DMatrix<f64> {
        &self.g
    }

    fn check_len(&self, u: &DVector<f64>) -> Result<(), AmbientError> {
        if u.len() != self.dim() {
            return Err(AmbientError::DimensionMismatch(format!(
                "vector of length {} in a {}-dimensional ambient",
                u.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// `u^T G v`.
    pub fn inner(&self, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64, AmbientError> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.pair(u, v))
    }

    pub fn apply_p(&self, u: &DVector<f64>) -> Result<DVector<f64>, AmbientError> {
        self.check_len(u)?;
        Ok(&self.p * u)
    }

    /// The fundamental 2-form `omega(u, v) = <u, P v>`.
    pub fn omega(&self, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64, AmbientError> {
        self.check_len(u)?;
        self.check_len(v)?;
        Ok(self.pair(u, &(&self.p * v)))
    }

    /// Unchecked `u^T G v`, for callers that own the shapes.
    pub(crate) fn pair(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        (u.transpose() * &self.g * v)[(0, 0)]
    }

    pub fn verify_structure(&self, tol: f64) -> StructureReport {
        let n = self.dim();
        let id = DMatrix::<f64>::identity(n, n);
        let product_residual = linalg::max_abs(&(&self.p * &self.p - &id));
        let compatibility_residual =
            linalg::max_abs(&(self.p.transpose() * &self.g * &self.p + &self.g));
        let symmetry_residual = linalg::max_abs(&(&self.g - self.g.transpose()));
        let (positive, negative) = linalg::signature(&self.g, tolerances::SIGNATURE_EIGEN);
        let pass = product_residual <= tol
            && compatibility_residual <= tol
            && symmetry_residual <= tol
            && positive == self.m
            && negative == self.m;
        StructureReport {
            dimension: n,
            product_residual,
            compatibility_residual,
            symmetry_residual,
            positive,
            negative,
            tolerance: tol,
            pass,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    #[test]
    fn canonical_three_swaps_halves() {
        let a = AmbientSpace::canonical(3);
        assert_eq!(a.apply_p(&e(6, 0)).unwrap(), e(6, 3));
        assert_eq!(a.apply_p(&e(6, 4)).unwrap(), e(6, 1));
        let diag: Vec<f64> = a.metric().diagonal().iter().copied().collect();
        assert_eq!(diag, vec![1.0, 1.0, 1.0, -1.0, -1.0, -1.0]);
        let r = a.verify_structure(1e-12);
        assert!(r.pass);
        assert_eq!(r.product_residual, 0.0);
        assert_eq!(r.compatibility_residual, 0.0);
        assert_eq!((r.positive, r.negative), (3, 3));
    }

    #[test]
    fn canonical_one_is_the_hyperbolic_plane() {
        let a = AmbientSpace::canonical(1);
        assert_eq!(a.structure(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        assert_eq!(a.metric(), &DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
    }

    #[test]
    fn canonical_two_anticommutes_with_metric() {
        let a = AmbientSpace::canonical(2);
        let p = a.structure();
        let g = a.metric();
        let s = p.transpose() * g * p + g;
        assert!(s.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn identity_structure_fails_compatibility() {
        let a = AmbientSpace::from_matrices(
            DMatrix::identity(2, 2),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
        )
        .unwrap();
        let r = a.verify_structure(1e-12);
        assert!(!r.pass);
        assert_eq!(r.product_residual, 0.0);
        assert_eq!(r.compatibility_residual, 2.0);
    }

    #[test]
    fn definite_metric_fails_signature() {
        let a = AmbientSpace::from_matrices(
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
            DMatrix::identity(2, 2),
        )
        .unwrap();
        let r = a.verify_structure(1e-12);
        assert_eq!((r.positive, r.negative), (2, 0));
        assert!(!r.pass);
    }

    #[test]
    fn orthogonal_conjugate_of_canonical_passes() {
        // Q^T P Q and Q^T G Q with Q orthogonal keep all three identities.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let raw = DMatrix::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
        let q = raw.qr().q();
        let a = AmbientSpace::canonical(2);
        let p = q.transpose() * a.structure() * &q;
        let g = q.transpose() * a.metric() * &q;
        let b = AmbientSpace::from_matrices(p, g).unwrap();
        assert!(b.verify_structure(1e-12).pass);
    }

    #[test]
    fn pairing_and_two_form() {
        let a = AmbientSpace::canonical(3);
        assert_eq!(a.inner(&e(6, 3), &e(6, 3)).unwrap(), -1.0);
        let u = e(6, 0);
        assert_eq!(a.inner(&u, &a.apply_p(&u).unwrap()).unwrap(), 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let u = DVector::from_fn(6, |_, _| rng.random_range(-2.0..2.0));
            let v = DVector::from_fn(6, |_, _| rng.random_range(-2.0..2.0));
            let pu = a.apply_p(&u).unwrap();
            let pv = a.apply_p(&v).unwrap();
            assert!((a.apply_p(&pu).unwrap() - &u).norm() < 1e-15);
            let lhs = a.inner(&pu, &pv).unwrap();
            let rhs = -a.inner(&u, &v).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12);
            let w = a.omega(&u, &v).unwrap() + a.omega(&v, &u).unwrap();
            assert!(w.abs() <= 1e-12);
        }
    }

    #[test]
    fn dimension_mismatches() {
        assert!(AmbientSpace::from_matrices(DMatrix::identity(3, 3), DMatrix::identity(3, 3)).is_err());
        assert!(AmbientSpace::from_matrices(DMatrix::identity(2, 2), DMatrix::identity(4, 4)).is_err());
        let a = AmbientSpace::canonical(1);
        assert!(a.inner(&DVector::zeros(3), &DVector::zeros(2)).is_err());
        assert!(a.apply_p(&DVector::zeros(4)).is_err());
    }
}
