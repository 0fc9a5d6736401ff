//! The product structure seen from the submanifold.
//!
//! `P` applied to a tangent vector splits as `tX + nX`, applied to a normal
//! vector as `t'zeta + n'zeta`. From `t` restricted to a distribution come the
//! slant coefficient and the classification into invariant, anti-invariant
//! and proper slant pieces.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::distributions::{Distribution, DistributionError};
use crate::linalg;
use crate::report::Check;
use crate::submanifold::{FieldJet, NormalVec, PointFrame, TangentVec};
use crate::tolerances;

/// Matrices of `t, n, t', n'` over the coordinate frame and the normal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TnDecomposition {
    /// `d x d`; column `j` holds the coefficients of `t d_j`.
    pub t: DMatrix<f64>,
    /// `r x d`; column `j` holds the normal coefficients of `n d_j`.
    pub n: DMatrix<f64>,
    /// `d x r`.
    pub t_prime: DMatrix<f64>,
    /// `r x r`.
    pub n_prime: DMatrix<f64>,
}

pub fn tn_decompose(frame: &PointFrame) -> TnDecomposition {
    let p = frame.ambient().structure();
    let pt = p * frame.tangent();
    let pn = p * frame.normal();
    let d = frame.dim();
    let r = frame.codim();
    let mut t = DMatrix::zeros(d, d);
    let mut n = DMatrix::zeros(r, d);
    for j in 0..d {
        let (a, b) = frame.split(&pt.column(j).clone_owned());
        t.set_column(j, &a.0);
        n.set_column(j, &b.0);
    }
    let mut t_prime = DMatrix::zeros(d, r);
    let mut n_prime = DMatrix::zeros(r, r);
    for j in 0..r {
        let (a, b) = frame.split(&pn.column(j).clone_owned());
        t_prime.set_column(j, &a.0);
        n_prime.set_column(j, &b.0);
    }
    TnDecomposition {
        t,
        n,
        t_prime,
        n_prime,
    }
}

impl TnDecomposition {
    pub fn t(&self, x: &TangentVec) -> TangentVec {
        TangentVec(&self.t * &x.0)
    }

    pub fn n(&self, x: &TangentVec) -> NormalVec {
        NormalVec(&self.n * &x.0)
    }

    pub fn t_prime(&self, z: &NormalVec) -> TangentVec {
        TangentVec(&self.t_prime * &z.0)
    }

    pub fn n_prime(&self, z: &NormalVec) -> NormalVec {
        NormalVec(&self.n_prime * &z.0)
    }
}

/// Largest Euclidean residual of `P T = T t + N n` and `P N = T t' + N n'`
/// over the frame and normal basis vectors, relative to the column norms.
pub fn recomposition_residuals(frame: &PointFrame, tn: &TnDecomposition) -> (f64, f64) {
    let p = frame.ambient().structure();
    let t_side = p * frame.tangent() - (frame.tangent() * &tn.t + frame.normal() * &tn.n);
    let n_side = p * frame.normal() - (frame.tangent() * &tn.t_prime + frame.normal() * &tn.n_prime);
    let rel = |m: &DMatrix<f64>, base: &DMatrix<f64>| {
        m.column_iter()
            .zip(base.column_iter())
            .map(|(r, b)| r.norm() / b.norm().max(1.0))
            .fold(0.0, f64::max)
    };
    (rel(&t_side, frame.tangent()), rel(&n_side, frame.normal()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecompositionReport {
    pub tangent_residual: f64,
    pub normal_residual: f64,
    pub checks: Vec<Check>,
}

pub fn recomposition_report(frames: &[PointFrame], tol: f64) -> RecompositionReport {
    let (mut a, mut b) = (0.0_f64, 0.0_f64);
    for f in frames {
        let (x, y) = recomposition_residuals(f, &tn_decompose(f));
        a = a.max(x);
        b = b.max(y);
    }
    RecompositionReport {
        tangent_residual: a,
        normal_residual: b,
        checks: vec![
            Check::new("P on tangents recomposes as t + n", a, tol),
            Check::new("P on normals recomposes as t' + n'", b, tol),
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SlantClass {
    Invariant,
    AntiInvariant,
    ProperSlant { lambda: f64 },
    NotSlant,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlantReport {
    pub distribution: String,
    pub rank: usize,
    /// Least-squares fit of `t^2 = lambda I` over all points and generators.
    pub lambda: f64,
    pub per_point: Vec<f64>,
    pub spread: f64,
    /// `max |S^2 - lambda I|` where `S` is `t` projected back onto the distribution.
    pub deviation: f64,
    /// Largest part of `tX` that leaves the distribution, relative to `|X|`.
    pub leakage: f64,
    pub antisymmetry: f64,
    pub max_t_ratio: f64,
    pub max_n_ratio: f64,
    pub classification: SlantClass,
    /// `theta` with `cos^2 theta = lambda`, when `lambda` lies in `[0, 1]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle_degrees: Option<f64>,
    pub checks: Vec<Check>,
}

/// Restricts `t` to `D` and classifies `D` over the given frames.
pub fn slant_analyze(
    frames: &[PointFrame],
    dist: &Distribution,
    tol: f64,
) -> Result<SlantReport, DistributionError> {
    if frames.is_empty() {
        return Err(DistributionError::NoSamplePoints);
    }
    let k = dist.rank();
    let mut per_point = Vec::with_capacity(frames.len());
    let mut squares = Vec::with_capacity(frames.len());
    let (mut leakage, mut antisym, mut tmax, mut nmax) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for f in frames {
        let basis = dist.basis_at(f)?;
        let tn = tn_decompose(f);
        if k == 0 {
            per_point.push(0.0);
            continue;
        }
        let tb = &tn.t * &basis;
        let gram = basis.transpose() * f.metric() * &basis;
        let s = linalg::solve_matrix(&gram, &(basis.transpose() * f.metric() * &tb))
            .ok_or_else(|| DistributionError::Degenerate {
                name: dist.name().to_string(),
                measure: 0.0,
            })?;
        let s2 = &s * &s;
        per_point.push(s2.trace() / k as f64);
        squares.push(s2);
        let out_of_d = &tb - &basis * &s;
        for j in 0..k {
            let x_amb = f.tangent() * basis.column(j);
            let scale = x_amb.norm();
            leakage = leakage.max((f.tangent() * out_of_d.column(j)).norm() / scale);
            tmax = tmax.max((f.tangent() * tb.column(j)).norm() / scale);
            nmax = nmax.max((f.normal() * (&tn.n * basis.column(j))).norm() / scale);
            for i in 0..k {
                let a = tb.column(j).dot(&(f.metric() * basis.column(i)));
                let b = basis.column(j).dot(&(f.metric() * tb.column(i)));
                antisym = antisym.max((a + b).abs());
            }
        }
    }
    let lambda = per_point.iter().sum::<f64>() / per_point.len() as f64;
    let deviation = squares
        .iter()
        .map(|s2| linalg::max_abs(&(s2 - DMatrix::identity(k, k) * lambda)))
        .fold(0.0, f64::max);
    let (lo, hi) = per_point
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let spread = hi - lo;

    let rel = tolerances::SLANT_DEVIATION * lambda.abs().max(1.0);
    let classification = if tmax <= tol {
        SlantClass::AntiInvariant
    } else if deviation > rel || spread > rel || leakage > rel || antisym > rel {
        SlantClass::NotSlant
    } else if (lambda - 1.0).abs() <= tol && nmax <= tol {
        SlantClass::Invariant
    } else {
        SlantClass::ProperSlant { lambda }
    };
    let angle_degrees = (0.0..=1.0)
        .contains(&lambda)
        .then(|| lambda.sqrt().acos().to_degrees());
    let mut checks = vec![Check::new(
        format!("{}: g(tX,Y) + g(X,tY) = 0", dist.name()),
        antisym,
        tolerances::IDENTITY,
    )];
    if matches!(classification, SlantClass::ProperSlant { .. } | SlantClass::Invariant) {
        checks.push(Check::new(
            format!("{}: t^2 = lambda I with constant lambda", dist.name()),
            deviation.max(spread),
            tolerances::IDENTITY,
        ));
    }
    Ok(SlantReport {
        distribution: dist.name().to_string(),
        rank: k,
        lambda,
        per_point,
        spread,
        deviation,
        leakage,
        antisymmetry: antisym,
        max_t_ratio: tmax,
        max_n_ratio: nmax,
        classification,
        angle_degrees,
        checks,
    })
}

/// An identity `a = sign * b` whose sign is measured rather than assumed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignedIdentity {
    pub measured_sign: f64,
    pub residual: f64,
    pub stated_sign: f64,
    pub stated_residual: f64,
}

impl SignedIdentity {
    pub fn fit(pairs: &[(f64, f64)], stated_sign: f64) -> SignedIdentity {
        let num: f64 = pairs.iter().map(|(a, b)| a * b).sum();
        let measured_sign = if num < 0.0 { -1.0 } else { 1.0 };
        let res = |s: f64| pairs.iter().map(|(a, b)| (a - s * b).abs()).fold(0.0, f64::max);
        SignedIdentity {
            measured_sign,
            residual: res(measured_sign),
            stated_sign,
            stated_residual: res(stated_sign),
        }
    }

    pub fn agrees_with_statement(&self) -> bool {
        self.measured_sign == self.stated_sign || self.stated_residual <= self.residual
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TIdentityReport {
    pub distribution: String,
    pub lambda: f64,
    /// `g(tX, tY)` against `lambda g(X, Y)`.
    pub metric_t: SignedIdentity,
    /// `<nX, nY>` against `(1 - lambda) g(X, Y)`.
    pub metric_n: SignedIdentity,
    /// `t' n X - (1 - lambda) X`.
    pub t_prime_n: f64,
    /// `n' n X + n t X`.
    pub n_prime_n: f64,
    pub checks: Vec<Check>,
}

/// Checks the `t`/`n` identities on a slant distribution with coefficient
/// `lambda`, measuring the signs of the two metric relations.
pub fn verify_t_identities(
    frames: &[PointFrame],
    dist: &Distribution,
    lambda: f64,
    tol: f64,
) -> Result<TIdentityReport, DistributionError> {
    let mut pt = Vec::new();
    let mut pn = Vec::new();
    let (mut r_tp, mut r_np) = (0.0_f64, 0.0_f64);
    for f in frames {
        let basis = dist.basis_at(f)?;
        let tn = tn_decompose(f);
        let cols: Vec<TangentVec> = basis
            .column_iter()
            .map(|c| TangentVec(c.clone_owned()))
            .collect();
        for x in &cols {
            let tx = tn.t(x);
            let nx = tn.n(x);
            for y in &cols {
                let gxy = f.g(x, y);
                pt.push((f.g(&tx, &tn.t(y)), lambda * gxy));
                pn.push((f.normal_inner(&nx, &tn.n(y)), (1.0 - lambda) * gxy));
            }
            let a = f.tangent_ambient(&tn.t_prime(&nx)) - f.tangent_ambient(x) * (1.0 - lambda);
            r_tp = r_tp.max(a.norm());
            let b = f.normal_ambient(&tn.n_prime(&nx)) + f.normal_ambient(&tn.n(&tx));
            r_np = r_np.max(b.norm());
        }
    }
    let metric_t = SignedIdentity::fit(&pt, 1.0);
    let metric_n = SignedIdentity::fit(&pn, 1.0);
    let name = dist.name();
    let checks = vec![
        Check::new(
            format!("{name}: g(tX,tY) = eps_t lambda g(X,Y), eps_t = {:+}", metric_t.measured_sign),
            metric_t.residual,
            tol,
        ),
        Check::new(
            format!(
                "{name}: <nX,nY> = eps_n (1 - lambda) g(X,Y), eps_n = {:+}",
                metric_n.measured_sign
            ),
            metric_n.residual,
            tol,
        ),
        Check::new(format!("{name}: t'nX = (1 - lambda) X"), r_tp, tol),
        Check::new(format!("{name}: n'nX = -ntX"), r_np, tol),
    ];
    Ok(TIdentityReport {
        distribution: name.to_string(),
        lambda,
        metric_t,
        metric_n,
        t_prime_n: r_tp,
        n_prime_n: r_np,
        checks,
    })
}

/// `W_ab = <d_a, P d_b>`, the 2-form on the coordinate frame.
pub fn omega_matrix(frame: &PointFrame) -> DMatrix<f64> {
    let a = frame.ambient();
    frame.tangent().transpose() * a.metric() * a.structure() * frame.tangent()
}

/// `d W / d x_k`.
pub fn omega_matrix_derivative(frame: &PointFrame, k: usize) -> DMatrix<f64> {
    let a = frame.ambient();
    let gp = a.metric() * a.structure();
    let dt = frame.tangent_derivative(k);
    dt.transpose() * &gp * frame.tangent() + frame.tangent().transpose() * &gp * dt
}

/// `omega(X, Y) = <X, P Y>`.
pub fn omega(frame: &PointFrame, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    x.dot(&(omega_matrix(frame) * y))
}

/// `X(omega(Y, Z))` by the product rule on coefficient jets.
fn omega_along(
    frame: &PointFrame,
    w: &DMatrix<f64>,
    x: &FieldJet,
    y: &FieldJet,
    z: &FieldJet,
) -> f64 {
    let mut dw = DMatrix::zeros(w.nrows(), w.ncols());
    for k in 0..x.value.len() {
        if x.value[k] != 0.0 {
            dw += omega_matrix_derivative(frame, k) * x.value[k];
        }
    }
    y.along(&x.value).dot(&(w * &z.value))
        + y.value.dot(&(dw * &z.value))
        + y.value.dot(&(w * z.along(&x.value)))
}

/// Exterior derivative of the 2-form, normalised with the factor `1/3`.
pub fn domega(frame: &PointFrame, x: &FieldJet, y: &FieldJet, z: &FieldJet) -> f64 {
    use crate::submanifold::lie_bracket;
    let w = omega_matrix(frame);
    let om = |a: &DVector<f64>, b: &DVector<f64>| a.dot(&(&w * b));
    let derivs = omega_along(frame, &w, x, y, z)
        + omega_along(frame, &w, y, z, x)
        + omega_along(frame, &w, z, x, y);
    let brackets = om(&lie_bracket(x, y).0, &z.value)
        + om(&lie_bracket(z, x).0, &y.value)
        + om(&lie_bracket(y, z).0, &x.value);
    (derivs - brackets) / 3.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomegaReport {
    pub triples: usize,
    pub max_abs: f64,
    pub check: Check,
}

/// `d omega` on every triple of coordinate fields across the frames.
pub fn domega_report(frames: &[PointFrame], tol: f64) -> DomegaReport {
    let mut max_abs = 0.0_f64;
    let mut triples = 0;
    for f in frames {
        let d = f.dim();
        let fields: Vec<FieldJet> = (0..d)
            .map(|i| FieldJet::constant(TangentVec::coordinate(d, i).0))
            .collect();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    max_abs = max_abs.max(domega(f, &fields[i], &fields[j], &fields[k]).abs());
                    triples += 1;
                }
            }
        }
    }
    let check = if triples == 0 {
        Check::vacuous("d omega = 0", "fewer than three parameters")
    } else {
        Check::new("d omega = 0 on coordinate triples", max_abs, tol)
    };
    DomegaReport {
        triples,
        max_abs,
        check,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::AmbientSpace;
    use crate::report::Verdict;
    use crate::submanifold::{Immersion, SamplePlan};

    fn cone() -> Immersion {
        let mut m = Immersion::from_sources(
            AmbientSpace::canonical(3),
            &["x1", "x1*cos(x2)", "x1*sin(x2)", "x3", "1.5", "-0.5"],
            vec![0.5, 0.0, 0.5],
            vec![2.0, 1.4, 2.0],
        )
        .unwrap();
        m.set_samples(SamplePlan { grid: 3, random: 4, seed: 1 });
        m
    }

    fn dlam() -> Distribution {
        Distribution::parse("slant", &[&["1", "0", "0"], &["0", "0", "1"]], 3).unwrap()
    }

    fn dbot() -> Distribution {
        Distribution::parse("anti", &[&["0", "1", "0"]], 3).unwrap()
    }

    #[test]
    fn cone_tn_at_unit_radius() {
        let f = cone().frame_at(&[1.0, 0.0, 1.0]).unwrap();
        let tn = tn_decompose(&f);
        let d1 = TangentVec::coordinate(3, 0);
        let d2 = TangentVec::coordinate(3, 1);
        let d3 = TangentVec::coordinate(3, 2);
        assert!((tn.t(&d1).0 - &d3.0).norm() < 1e-14);
        let e5 = DVector::from_vec(vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        assert!((f.normal_ambient(&tn.n(&d1)) - e5).norm() < 1e-14);
        assert!(tn.t(&d2).0.norm() < 1e-14);
        assert!((tn.t(&d3).0 - &d1.0 * 0.5).norm() < 1e-14);
        let (a, b) = recomposition_residuals(&f, &tn);
        assert!(a < 1e-13 && b < 1e-13);
    }

    #[test]
    fn invariant_plane_has_no_normal_part() {
        let m = Immersion::from_sources(
            AmbientSpace::canonical(2),
            &["x1", "0", "x2", "0"],
            vec![-1.0, -1.0],
            vec![1.0, 1.0],
        )
        .unwrap();
        let f = m.frame_at(&[0.3, 0.1]).unwrap();
        let tn = tn_decompose(&f);
        assert_eq!(linalg::max_abs(&tn.n), 0.0);
        let s = m.sample();
        let all = Distribution::parse("all", &[&["1", "0"], &["0", "1"]], 2).unwrap();
        let r = slant_analyze(&s.frames, &all, 1e-8).unwrap();
        assert_eq!(r.classification, SlantClass::Invariant);
        assert!((r.lambda - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cone_slant_coefficient_is_one_half() {
        let s = cone().sample();
        let r = slant_analyze(&s.frames, &dlam(), 1e-8).unwrap();
        assert!((r.lambda - 0.5).abs() < 1e-12, "{}", r.lambda);
        assert!(r.spread < 1e-12);
        assert!(r.antisymmetry < 1e-12);
        assert!(matches!(r.classification, SlantClass::ProperSlant { .. }));
        assert!((r.angle_degrees.unwrap() - 45.0).abs() < 1e-9);

        let r = slant_analyze(&s.frames, &dbot(), 1e-8).unwrap();
        assert_eq!(r.classification, SlantClass::AntiInvariant);
        assert!(r.max_t_ratio < 1e-12);
    }

    #[test]
    fn cone_identities_carry_negative_signs() {
        let s = cone().sample();
        let r = verify_t_identities(&s.frames, &dlam(), 0.5, 1e-9).unwrap();
        assert_eq!(r.metric_t.measured_sign, -1.0);
        assert_eq!(r.metric_n.measured_sign, -1.0);
        assert!(r.metric_t.residual < 1e-12);
        assert!(r.metric_n.residual < 1e-12);
        assert!(r.metric_t.stated_residual > 0.5);
        assert!(r.t_prime_n < 1e-12 && r.n_prime_n < 1e-12);
        assert!(r.checks.iter().all(|c| c.verdict == Verdict::Pass));
    }

    #[test]
    fn cone_two_form() {
        let f = cone().frame_at(&[1.0, 0.0, 1.0]).unwrap();
        let e = |i| TangentVec::coordinate(3, i).0;
        assert!((omega(&f, &e(0), &e(2)) - 1.0).abs() < 1e-15);
        for i in 0..3 {
            assert_eq!(omega(&f, &e(i), &e(i)), 0.0);
        }
        let s = cone().sample();
        let r = domega_report(&s.frames, 1e-9);
        assert_eq!(r.check.verdict, Verdict::Pass);
        assert_eq!(r.triples, s.frames.len());
    }

    #[test]
    fn domega_vanishes_for_non_coordinate_fields() {
        let m = cone();
        let p = [1.2, 0.7, 1.1];
        let f = m.frame_at(&p).unwrap();
        let x = crate::VectorField::parse(&["x2", "1", "x1*x3"], 3).unwrap();
        let y = crate::VectorField::parse(&["sin(x1)", "x3", "0"], 3).unwrap();
        let z = crate::VectorField::parse(&["1", "x1^2", "cos(x2)"], 3).unwrap();
        let v = domega(&f, &x.eval(&p).unwrap(), &y.eval(&p).unwrap(), &z.eval(&p).unwrap());
        assert!(v.abs() < 1e-12, "{v}");
    }
}
