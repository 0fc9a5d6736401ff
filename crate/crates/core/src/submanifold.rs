//! Immersions and the Gauss-Weingarten layer.
//!
//! At a parameter point an immersion `Omega: R^d -> R^2m` yields the tangent
//! frame `T = dOmega`, the induced metric `g = T^T G T`, a `G`-orthogonal
//! normal complement `N`, and the second partials of `Omega`. Every split of an
//! ambient vector into tangential and normal parts goes through the
//! block-diagonal Gram system of `[T | N]`; frames are never orthonormalised,
//! so timelike directions need no square roots of negative norms.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ambient::AmbientSpace;
use crate::linalg;
use crate::report::Check;
use crate::scalarfield::{eval_jet2, parse, DomainError, Expr, Jet2, ParseError};
use crate::tolerances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point {0:?} lies outside the parameter domain")]
    OutOfDomain(Vec<f64>),
    #[error("point lies on the excluded hyperplane x{var} = {value}")]
    Excluded { var: usize, value: f64 },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("tangent frame has rank {rank}, expected {dim}")]
    RankDeficient { rank: usize, dim: usize },
    #[error("induced metric is degenerate (normalised determinant {measure:e})")]
    DegenerateMetric { measure: f64 },
    #[error("metric restricted to the normal space is degenerate (normalised determinant {measure:e})")]
    DegenerateNormal { measure: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Hyperplane `x{var+1} = value` removed from the parameter domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub var: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub excluded: Vec<Hyperplane>,
}

impl Domain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Domain {
        Domain {
            lo,
            hi,
            excluded: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    fn slack(&self, i: usize) -> f64 {
        1e-9 * (self.hi[i] - self.lo[i]).abs().max(1.0)
    }

    pub fn check(&self, p: &[f64]) -> Result<(), GeometryError> {
        if p.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch(format!(
                "point has {} coordinates, domain has {}",
                p.len(),
                self.dim()
            )));
        }
        for i in 0..p.len() {
            let s = self.slack(i);
            if !(p[i] >= self.lo[i] - s && p[i] <= self.hi[i] + s) {
                return Err(GeometryError::OutOfDomain(p.to_vec()));
            }
        }
        for h in &self.excluded {
            if (p[h.var] - h.value).abs() <= self.slack(h.var) {
                return Err(GeometryError::Excluded {
                    var: h.var + 1,
                    value: h.value,
                });
            }
        }
        Ok(())
    }
}

/// Regular grid on the interior of the domain plus seeded uniform points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplePlan {
    pub grid: usize,
    pub random: usize,
    pub seed: u64,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            grid: 5,
            random: 20,
            seed: 0,
        }
    }
}

/// Fraction of each side kept clear of the boundary when sampling.
const SAMPLE_MARGIN: f64 = 0.05;

impl SamplePlan {
    /// Grid points in lexicographic order followed by the random points.
    pub fn points(&self, domain: &Domain) -> Vec<Vec<f64>> {
        let d = domain.dim();
        let lo: Vec<f64> = (0..d)
            .map(|i| domain.lo[i] + SAMPLE_MARGIN * (domain.hi[i] - domain.lo[i]))
            .collect();
        let hi: Vec<f64> = (0..d)
            .map(|i| domain.hi[i] - SAMPLE_MARGIN * (domain.hi[i] - domain.lo[i]))
            .collect();
        let axis = |i: usize, k: usize| -> f64 {
            if self.grid == 1 {
                0.5 * (lo[i] + hi[i])
            } else {
                lo[i] + (hi[i] - lo[i]) * k as f64 / (self.grid - 1) as f64
            }
        };
        let mut out = Vec::new();
        if self.grid > 0 {
            let total = self.grid.pow(d as u32);
            for flat in 0..total {
                let mut rem = flat;
                let mut p = vec![0.0; d];
                for i in (0..d).rev() {
                    p[i] = axis(i, rem % self.grid);
                    rem /= self.grid;
                }
                out.push(p);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random {
            let p = (0..d)
                .map(|i| {
                    let u: f64 = rng.random();
                    lo[i] + (hi[i] - lo[i]) * u
                })
                .collect();
            out.push(p);
        }
        out
    }
}

/// Coefficients of a tangent vector over the coordinate frame.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVec(pub DVector<f64>);

/// Coefficients of a normal vector over the columns of `PointFrame::normal`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalVec(pub DVector<f64>);

impl TangentVec {
    pub fn coordinate(dim: usize, i: usize) -> TangentVec {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        TangentVec(v)
    }

    pub fn coeffs(&self) -> &DVector<f64> {
        &self.0
    }
}

impl NormalVec {
    pub fn coeffs(&self) -> &DVector<f64> {
        &self.0
    }
}

/// A vector field given by coefficient expressions over the coordinate frame.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    coeffs: Vec<Expr>,
}

/// Values and first derivatives of a vector field's coefficients at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldJet {
    pub value: DVector<f64>,
    /// `jac[(j, i)] = d Y^j / d x_i`.
    pub jac: DMatrix<f64>,
}

impl FieldJet {
    pub fn constant(value: DVector<f64>) -> FieldJet {
        let d = value.len();
        FieldJet {
            value,
            jac: DMatrix::zeros(d, d),
        }
    }

    /// Componentwise derivative of the coefficients along `x`.
    pub fn along(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.jac * x
    }
}

impl VectorField {
    pub fn new(coeffs: Vec<Expr>) -> VectorField {
        VectorField { coeffs }
    }

    /// `d/dx{i+1}`.
    pub fn coordinate(dim: usize, i: usize) -> VectorField {
        VectorField {
            coeffs: (0..dim)
                .map(|j| Expr::Const(if i == j { 1.0 } else { 0.0 }))
                .collect(),
        }
    }

    pub fn parse(sources: &[&str], dim: usize) -> Result<VectorField, ParseError> {
        let coeffs = sources
            .iter()
            .map(|s| parse(s, dim))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VectorField { coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn eval(&self, p: &[f64]) -> Result<FieldJet, DomainError> {
        let d = p.len();
        let mut value = DVector::zeros(d);
        let mut jac = DMatrix::zeros(d, d);
        for (j, e) in self.coeffs.iter().enumerate() {
            let jet = eval_jet2(e, p)?;
            value[j] = jet.value;
            jac.row_mut(j).copy_from(&jet.grad.transpose());
        }
        Ok(FieldJet { value, jac })
    }
}

/// Jet of the field `[X, Y]`, which needs second derivatives of both
/// coefficient sets.
pub fn bracket_jet(x: &VectorField, y: &VectorField, p: &[f64]) -> Result<FieldJet, DomainError> {
    let d = p.len();
    let xs = x.coeffs.iter().map(|e| eval_jet2(e, p)).collect::<Result<Vec<_>, _>>()?;
    let ys = y.coeffs.iter().map(|e| eval_jet2(e, p)).collect::<Result<Vec<_>, _>>()?;
    let mut value = DVector::zeros(d);
    let mut jac = DMatrix::zeros(d, d);
    for j in 0..d {
        for i in 0..d {
            value[j] += xs[i].value * ys[j].grad[i] - ys[i].value * xs[j].grad[i];
            for k in 0..d {
                jac[(j, k)] += xs[i].grad[k] * ys[j].grad[i] + xs[i].value * ys[j].hess[(i, k)]
                    - ys[i].grad[k] * xs[j].grad[i]
                    - ys[i].value * xs[j].hess[(i, k)];
            }
        }
    }
    Ok(FieldJet { value, jac })
}

/// `[X, Y]` from the coefficient jets; coordinate fields commute.
pub fn lie_bracket(x: &FieldJet, y: &FieldJet) -> TangentVec {
    TangentVec(y.along(&x.value) - x.along(&y.value))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Immersion {
    dim: usize,
    ambient: AmbientSpace,
    coords: Vec<Expr>,
    domain: Domain,
    samples: SamplePlan,
}

impl Immersion {
    pub fn new(
        ambient: AmbientSpace,
        coords: Vec<Expr>,
        domain: Domain,
        samples: SamplePlan,
    ) -> Result<Immersion, GeometryError> {
        let dim = domain.dim();
        if coords.len() != ambient.dim() {
            return Err(GeometryError::DimensionMismatch(format!(
                "{} coordinate functions for a {}-dimensional ambient",
                coords.len(),
                ambient.dim()
            )));
        }
        if domain.hi.len() != dim || dim == 0 || dim > ambient.dim() {
            return Err(GeometryError::DimensionMismatch(format!(
                "parameter box of dimension {dim} (hi has {}) in a {}-dimensional ambient",
                domain.hi.len(),
                ambient.dim()
            )));
        }
        if let Some(v) = coords.iter().filter_map(Expr::max_var).max() {
            if v >= dim {
                return Err(GeometryError::DimensionMismatch(format!(
                    "coordinate expression uses x{} but d = {dim}",
                    v + 1
                )));
            }
        }
        if let Some(h) = domain.excluded.iter().find(|h| h.var >= dim) {
            return Err(GeometryError::DimensionMismatch(format!(
                "excluded hyperplane on x{} but d = {dim}",
                h.var + 1
            )));
        }
        Ok(Immersion {
            dim,
            ambient,
            coords,
            domain,
            samples,
        })
    }

    /// Convenience constructor from coordinate source strings.
    pub fn from_sources(
        ambient: AmbientSpace,
        sources: &[&str],
        lo: Vec<f64>,
        hi: Vec<f64>,
    ) -> Result<Immersion, Box<dyn std::error::Error>> {
        let d = lo.len();
        let coords = sources
            .iter()
            .map(|s| parse(s, d))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Immersion::new(
            ambient,
            coords,
            Domain::new(lo, hi),
            SamplePlan::default(),
        )?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn coords(&self) -> &[Expr] {
        &self.coords
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn domain_mut(&mut self) -> &mut Domain {
        &mut self.domain
    }

    pub fn samples(&self) -> SamplePlan {
        self.samples
    }

    pub fn set_samples(&mut self, samples: SamplePlan) {
        self.samples = samples;
    }

    pub fn sample_points(&self) -> Vec<Vec<f64>> {
        self.samples.points(&self.domain)
    }

    /// Frames at every sample point where all guards pass, in plan order,
    /// together with the points that were skipped and why.
    pub fn sample(&self) -> Sample {
        let mut frames = Vec::new();
        let mut skipped = Vec::new();
        for (index, p) in self.sample_points().into_iter().enumerate() {
            match self.frame_at(&p) {
                Ok(f) => frames.push(f),
                Err(e) => skipped.push(SkippedPoint {
                    index,
                    point: p,
                    reason: e.to_string(),
                }),
            }
        }
        Sample { frames, skipped }
    }

    pub fn frame_at(&self, p: &[f64]) -> Result<PointFrame, GeometryError> {
        self.domain.check(p)?;
        let n = self.ambient.dim();
        let d = self.dim;
        let mut tangent = DMatrix::zeros(n, d);
        let mut second = Vec::with_capacity(n);
        for (a, e) in self.coords.iter().enumerate() {
            let Jet2 { grad, hess, .. } = eval_jet2(e, p)?;
            tangent.row_mut(a).copy_from(&grad.transpose());
            second.push(hess);
        }
        PointFrame::build(p.to_vec(), self.ambient.clone(), tangent, second)
    }

    /// `nabla_X Y` at `p`.
    pub fn connection(
        &self,
        p: &[f64],
        x: &VectorField,
        y: &VectorField,
    ) -> Result<TangentVec, GeometryError> {
        let f = self.frame_at(p)?;
        Ok(f.connection(&x.eval(p)?, &y.eval(p)?))
    }

    /// Gradient of `f` with respect to the induced metric.
    pub fn gradient(&self, p: &[f64], f: &Expr) -> Result<TangentVec, GeometryError> {
        let frame = self.frame_at(p)?;
        Ok(frame.gradient(&eval_jet2(f, p)?.grad))
    }

    pub fn lie_bracket(
        &self,
        p: &[f64],
        x: &VectorField,
        y: &VectorField,
    ) -> Result<TangentVec, GeometryError> {
        self.domain.check(p)?;
        Ok(lie_bracket(&x.eval(p)?, &y.eval(p)?))
    }
}

/// Frames over the sample plan.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub frames: Vec<PointFrame>,
    pub skipped: Vec<SkippedPoint>,
}

/// A sample point at which a guard failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedPoint {
    pub index: usize,
    pub point: Vec<f64>,
    pub reason: String,
}

/// Everything the Gauss-Weingarten formulas need at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFrame {
    point: Vec<f64>,
    ambient: AmbientSpace,
    tangent: DMatrix<f64>,
    metric: DMatrix<f64>,
    metric_inv: DMatrix<f64>,
    normal: DMatrix<f64>,
    normal_gram: DMatrix<f64>,
    normal_gram_inv: DMatrix<f64>,
    /// Hessian of each ambient coordinate of the immersion.
    second: Vec<DMatrix<f64>>,
    /// `h(d_i, d_j)` as ambient vectors, row-major in `(i, j)`.
    sff: Vec<DVector<f64>>,
}

impl PointFrame {
    fn build(
        point: Vec<f64>,
        ambient: AmbientSpace,
        tangent: DMatrix<f64>,
        second: Vec<DMatrix<f64>>,
    ) -> Result<PointFrame, GeometryError> {
        let d = tangent.ncols();
        let g_amb = ambient.metric();
        let rank = linalg::rank(&tangent, 1e-10);
        if rank < d {
            return Err(GeometryError::RankDeficient { rank, dim: d });
        }
        let metric = tangent.transpose() * g_amb * &tangent;
        let measure = linalg::normalized_gram_det(&metric, &tangent);
        if measure < tolerances::DEGENERACY {
            return Err(GeometryError::DegenerateMetric { measure });
        }
        let metric_inv = metric
            .clone()
            .try_inverse()
            .ok_or(GeometryError::DegenerateMetric { measure })?;

        let constraint = tangent.transpose() * g_amb;
        let normal = linalg::orthonormalize_columns(&linalg::nullspace(&constraint, 1e-10));
        if normal.ncols() != ambient.dim() - d {
            return Err(GeometryError::RankDeficient { rank, dim: d });
        }
        let normal_gram = normal.transpose() * g_amb * &normal;
        let nmeasure = linalg::normalized_gram_det(&normal_gram, &normal);
        if nmeasure < tolerances::DEGENERACY {
            return Err(GeometryError::DegenerateNormal { measure: nmeasure });
        }
        let normal_gram_inv = if normal.ncols() == 0 {
            DMatrix::zeros(0, 0)
        } else {
            normal_gram
                .clone()
                .try_inverse()
                .ok_or(GeometryError::DegenerateNormal { measure: nmeasure })?
        };

        let mut frame = PointFrame {
            point,
            ambient,
            tangent,
            metric,
            metric_inv,
            normal,
            normal_gram,
            normal_gram_inv,
            second,
            sff: Vec::new(),
        };
        let mut sff = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let v = frame.second_partial(i, j);
                let nrm = frame.normal_part(&v);
                sff.push(&frame.normal * nrm.0);
            }
        }
        frame.sff = sff;
        Ok(frame)
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn dim(&self) -> usize {
        self.tangent.ncols()
    }

    pub fn codim(&self) -> usize {
        self.normal.ncols()
    }

    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    /// Columns `dOmega/dx_i`.
    pub fn tangent(&self) -> &DMatrix<f64> {
        &self.tangent
    }

    /// Induced metric `T^T G T`.
    pub fn metric(&self) -> &DMatrix<f64> {
        &self.metric
    }

    pub fn metric_inverse(&self) -> &DMatrix<f64> {
        &self.metric_inv
    }

    /// Euclidean-orthonormal basis of the `G`-orthogonal complement of `T`.
    pub fn normal(&self) -> &DMatrix<f64> {
        &self.normal
    }

    /// `N^T G N`.
    pub fn normal_gram(&self) -> &DMatrix<f64> {
        &self.normal_gram
    }

    /// `d^2 Omega / dx_i dx_j` as an ambient vector.
    pub fn second_partial(&self, i: usize, j: usize) -> DVector<f64> {
        DVector::from_iterator(self.second.len(), self.second.iter().map(|h| h[(i, j)]))
    }

    pub fn tangent_ambient(&self, x: &TangentVec) -> DVector<f64> {
        &self.tangent * &x.0
    }

    pub fn normal_ambient(&self, z: &NormalVec) -> DVector<f64> {
        &self.normal * &z.0
    }

    pub fn tangent_part(&self, v: &DVector<f64>) -> TangentVec {
        let rhs = self.tangent.transpose() * self.ambient.metric() * v;
        TangentVec(&self.metric_inv * rhs)
    }

    pub fn normal_part(&self, v: &DVector<f64>) -> NormalVec {
        let rhs = self.normal.transpose() * self.ambient.metric() * v;
        NormalVec(&self.normal_gram_inv * rhs)
    }

    /// Tangential and normal components of an ambient vector.
    pub fn split(&self, v: &DVector<f64>) -> (TangentVec, NormalVec) {
        (self.tangent_part(v), self.normal_part(v))
    }

    /// `g(X, Y)`.
    pub fn g(&self, x: &TangentVec, y: &TangentVec) -> f64 {
        x.0.dot(&(&self.metric * &y.0))
    }

    /// Ambient pairing of two normal vectors.
    pub fn normal_inner(&self, a: &NormalVec, b: &NormalVec) -> f64 {
        a.0.dot(&(&self.normal_gram * &b.0))
    }

    /// `sum_ij X^i Y^j d_i d_j Omega`, the ambient derivative of the
    /// constant-coefficient extension of `Y` along `X`.
    pub fn second_derivative(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.second.len(),
            self.second.iter().map(|h| x.dot(&(h * y))),
        )
    }

    /// `h(X, Y)` as an ambient vector.
    pub fn sff_ambient(&self, x: &TangentVec, y: &TangentVec) -> DVector<f64> {
        let d = self.dim();
        let mut out = DVector::zeros(self.ambient.dim());
        for i in 0..d {
            for j in 0..d {
                let c = x.0[i] * y.0[j];
                if c != 0.0 {
                    out.axpy(c, &self.sff[i * d + j], 1.0);
                }
            }
        }
        out
    }

    /// Second fundamental form `h(X, Y)`.
    pub fn second_fundamental_form(&self, x: &TangentVec, y: &TangentVec) -> NormalVec {
        self.normal_part(&self.second_derivative(&x.0, &y.0))
    }

    /// `<h(X, Y), zeta>` for an ambient vector `zeta`, i.e. `g(A_zeta X, Y)`
    /// when `zeta` is normal.
    pub fn sff_pairing(&self, x: &TangentVec, y: &TangentVec, zeta: &DVector<f64>) -> f64 {
        self.ambient.pair(&self.sff_ambient(x, y), zeta)
    }

    /// Matrix of the shape operator `A_zeta` in the coordinate frame,
    /// `A = g^{-1} H` with `H_ij = <h(d_i, d_j), zeta>`.
    pub fn shape_operator(&self, zeta: &NormalVec) -> DMatrix<f64> {
        let z = self.normal_ambient(zeta);
        let d = self.dim();
        let h = DMatrix::from_fn(d, d, |i, j| self.ambient.pair(&self.sff[i * d + j], &z));
        &self.metric_inv * h
    }

    /// Ambient derivative `bar-nabla_X Y` of the field with coefficient jet `y`.
    pub fn ambient_derivative(&self, x: &FieldJet, y: &FieldJet) -> DVector<f64> {
        &self.tangent * y.along(&x.value) + self.second_derivative(&x.value, &y.value)
    }

    /// Induced connection `nabla_X Y`.
    pub fn connection(&self, x: &FieldJet, y: &FieldJet) -> TangentVec {
        let accel = self.tangent_part(&self.second_derivative(&x.value, &y.value));
        TangentVec(y.along(&x.value) + accel.0)
    }

    /// Gradient of a function from its parameter gradient: solves `g c = df`.
    pub fn gradient(&self, df: &DVector<f64>) -> TangentVec {
        TangentVec(&self.metric_inv * df)
    }

    /// `d T / d x_k`: column `i` is `d^2 Omega / dx_i dx_k`.
    pub fn tangent_derivative(&self, k: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.ambient.dim(), self.dim(), |a, i| self.second[a][(i, k)])
    }

    /// `d g_ij / d x_k`, exact from the second partials.
    pub fn metric_derivative(&self, k: usize) -> DMatrix<f64> {
        let dt = self.tangent_derivative(k);
        let half = dt.transpose() * self.ambient.metric() * &self.tangent;
        &half + half.transpose()
    }
}

/// Residuals of the frame-level identities every immersion satisfies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentitySuite {
    /// `bar-nabla_X Y - nabla_X Y - h(X, Y)`.
    pub gauss: f64,
    /// `g(A_zeta X, Y) - <h(X, Y), zeta>`.
    pub weingarten: f64,
    pub sff_symmetry: f64,
    /// `nabla_X Y - nabla_Y X - [X, Y]` on fields with varying coefficients.
    pub torsion: f64,
    /// `d_k g_ij - g(nabla_k d_i, d_j) - g(d_i, nabla_k d_j)`.
    pub metric_compatibility: f64,
    pub checks: Vec<Check>,
}

/// Fixed coefficient jets used to exercise brackets and torsion.
fn test_fields(d: usize) -> Vec<FieldJet> {
    (0..d)
        .map(|i| {
            let value = DVector::from_fn(d, |r, _| if r == i { 1.0 } else { 0.25 * (r + i) as f64 });
            let jac = DMatrix::from_fn(d, d, |r, c| ((r + 2 * c + i + 1) as f64).sin());
            FieldJet { value, jac }
        })
        .collect()
}

pub fn identity_suite(frames: &[PointFrame], tol: f64) -> IdentitySuite {
    let (mut gauss, mut wein, mut sym, mut tors, mut mc) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for f in frames {
        let d = f.dim();
        let e: Vec<TangentVec> = (0..d).map(|i| TangentVec::coordinate(d, i)).collect();
        let fields = test_fields(d);
        for x in &fields {
            for y in &fields {
                let amb = f.ambient_derivative(x, y);
                let split = f.tangent_ambient(&f.connection(x, y))
                    + f.sff_ambient(&TangentVec(x.value.clone()), &TangentVec(y.value.clone()));
                gauss = gauss.max(linalg::max_abs_vec(&(amb - split)));
                let t = f.connection(x, y).0 - f.connection(y, x).0 - lie_bracket(x, y).0;
                tors = tors.max(linalg::max_abs_vec(&t));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let a = f.sff_ambient(&e[i], &e[j]);
                let b = f.sff_ambient(&e[j], &e[i]);
                sym = sym.max(linalg::max_abs_vec(&(a - b)));
            }
        }
        for c in 0..f.codim() {
            let zeta = NormalVec(DVector::from_fn(f.codim(), |r, _| if r == c { 1.0 } else { 0.0 }));
            let za = f.normal_ambient(&zeta);
            let a = f.shape_operator(&zeta);
            for x in &fields {
                for y in &fields {
                    let (xv, yv) = (TangentVec(x.value.clone()), TangentVec(y.value.clone()));
                    let lhs = f.g(&TangentVec(&a * &xv.0), &yv);
                    wein = wein.max((lhs - f.sff_pairing(&xv, &yv, &za)).abs());
                }
            }
        }
        let coord: Vec<FieldJet> = (0..d).map(|i| FieldJet::constant(e[i].0.clone())).collect();
        for k in 0..d {
            let dg = f.metric_derivative(k);
            for i in 0..d {
                for j in 0..d {
                    let rhs = f.g(&f.connection(&coord[k], &coord[i]), &e[j])
                        + f.g(&e[i], &f.connection(&coord[k], &coord[j]));
                    mc = mc.max((dg[(i, j)] - rhs).abs());
                }
            }
        }
    }
    IdentitySuite {
        gauss,
        weingarten: wein,
        sff_symmetry: sym,
        torsion: tors,
        metric_compatibility: mc,
        checks: vec![
            Check::new("Gauss formula splits the ambient derivative", gauss, tol),
            Check::new("g(A_zeta X, Y) = <h(X,Y), zeta>", wein, tol),
            Check::new("h is symmetric", sym, tol),
            Check::new("nabla is torsion free", tors, tol),
            Check::new("nabla is metric compatible", mc, tol),
        ],
    }
}
