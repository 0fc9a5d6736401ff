//! Tangent sub-bundles given by generator fields, the anti-invariant plus
//! slant decomposition of `TM`, and the integrability and foliation
//! conditions expressed through shape operators.
//!
//! Each printed condition is evaluated next to a direct oracle: Lie brackets
//! for integrability, the induced connection for totally geodesic leaves.
//! The two are tied by an identity of the form `lambda * oracle = condition`,
//! which is checked separately.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::linalg;
use crate::parastructure::{slant_analyze, tn_decompose, SlantClass, SlantReport};
use crate::report::{Check, Verdict};
use crate::scalarfield::ParseError;
use crate::submanifold::{lie_bracket, FieldJet, GeometryError, PointFrame, TangentVec, VectorField};
use crate::tolerances::{self, Tolerances};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("no usable sample points")]
    NoSamplePoints,
    #[error("generators of `{name}` have rank {rank}, expected {expected}")]
    RankDeficient {
        name: String,
        rank: usize,
        expected: usize,
    },
    #[error("metric restricted to `{name}` is degenerate (normalised determinant {measure:e})")]
    Degenerate { name: String, measure: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl From<crate::scalarfield::DomainError> for DistributionError {
    fn from(e: crate::scalarfield::DomainError) -> Self {
        DistributionError::Geometry(GeometryError::Domain(e))
    }
}

/// A named distribution spanned by generator fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    name: String,
    gens: Vec<VectorField>,
}

impl Distribution {
    pub fn new(name: impl Into<String>, gens: Vec<VectorField>) -> Distribution {
        Distribution {
            name: name.into(),
            gens,
        }
    }

    /// One slice of coefficient sources per generator.
    pub fn parse(name: &str, gens: &[&[&str]], dim: usize) -> Result<Distribution, ParseError> {
        let gens = gens
            .iter()
            .map(|g| VectorField::parse(g, dim))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Distribution::new(name, gens))
    }

    /// Span of the coordinate fields `d_i`, `i` in `indices` (zero-based).
    pub fn coordinate(name: &str, dim: usize, indices: &[usize]) -> Distribution {
        Distribution::new(
            name,
            indices.iter().map(|&i| VectorField::coordinate(dim, i)).collect(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[VectorField] {
        &self.gens
    }

    pub fn jets_at(&self, frame: &PointFrame) -> Result<Vec<FieldJet>, DistributionError> {
        let d = frame.dim();
        if let Some(g) = self.gens.iter().find(|g| g.dim() != d) {
            return Err(DistributionError::DimensionMismatch(format!(
                "generator of `{}` has {} coefficients, d = {d}",
                self.name,
                g.dim()
            )));
        }
        Ok(self
            .gens
            .iter()
            .map(|g| g.eval(frame.point()))
            .collect::<Result<Vec<_>, _>>()?)
    }

    /// Generator values as the columns of a `d x k` matrix, after checking
    /// rank and non-degeneracy at the frame's point.
    pub fn basis_at(&self, frame: &PointFrame) -> Result<DMatrix<f64>, DistributionError> {
        let jets = self.jets_at(frame)?;
        let d = frame.dim();
        let mut b = DMatrix::zeros(d, jets.len());
        for (j, jet) in jets.iter().enumerate() {
            b.set_column(j, &jet.value);
        }
        self.validate(frame, &b)?;
        Ok(b)
    }

    fn validate(&self, frame: &PointFrame, b: &DMatrix<f64>) -> Result<(), DistributionError> {
        let k = b.ncols();
        if k == 0 {
            return Ok(());
        }
        let rank = linalg::rank(b, 1e-10);
        if rank < k {
            return Err(DistributionError::RankDeficient {
                name: self.name.clone(),
                rank,
                expected: k,
            });
        }
        let gram = b.transpose() * frame.metric() * b;
        let measure = linalg::normalized_gram_det(&gram, &(frame.tangent() * b));
        if measure < tolerances::DEGENERACY {
            return Err(DistributionError::Degenerate {
                name: self.name.clone(),
                measure,
            });
        }
        Ok(())
    }

    /// `g`-orthogonal projection of `x` onto the distribution.
    pub fn project(&self, frame: &PointFrame, x: &TangentVec) -> Result<TangentVec, DistributionError> {
        let b = self.basis_at(frame)?;
        Ok(TangentVec(project_onto(frame, &b, &x.0)))
    }
}

fn project_onto(frame: &PointFrame, b: &DMatrix<f64>, x: &DVector<f64>) -> DVector<f64> {
    if b.ncols() == 0 {
        return DVector::zeros(x.len());
    }
    let gb = frame.metric() * b;
    let gram = b.transpose() * &gb;
    let a = linalg::solve(&gram, &(gb.transpose() * x)).expect("validated non-degenerate");
    b * a
}

pub fn projection(
    frame: &PointFrame,
    dist: &Distribution,
    x: &TangentVec,
) -> Result<TangentVec, DistributionError> {
    dist.project(frame, x)
}

/// Outcome of a geometric condition, as opposed to the verdict of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Holds,
    DoesNotHold,
    Inconclusive,
    Vacuous,
}

impl Status {
    pub fn grade(residual: f64, tol: &Tolerances) -> Status {
        match Verdict::grade(residual, tolerances::AGREEMENT, tol.structural) {
            Verdict::Pass => Status::Holds,
            Verdict::Fail => Status::DoesNotHold,
            _ => Status::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrabilityReport {
    pub distribution: String,
    pub pairs: usize,
    /// Largest Euclidean norm, in parameter coordinates, of the part of a
    /// generator bracket outside the span of the generators.
    pub out_of_span: f64,
    pub status: Status,
}

/// Brackets of all generator pairs against the span of the generators.
pub fn integrability_test(
    frames: &[PointFrame],
    dist: &Distribution,
    tol: &Tolerances,
) -> Result<IntegrabilityReport, DistributionError> {
    if frames.is_empty() {
        return Err(DistributionError::NoSamplePoints);
    }
    let k = dist.rank();
    let mut out_of_span = 0.0_f64;
    let mut pairs = 0;
    for f in frames {
        let jets = dist.jets_at(f)?;
        let b = dist.basis_at(f)?;
        if k < 2 {
            continue;
        }
        let q = b.qr().q();
        for i in 0..k {
            for j in i + 1..k {
                let br = lie_bracket(&jets[i], &jets[j]).0;
                let resid = &br - &q * (q.transpose() * &br);
                out_of_span = out_of_span.max(resid.norm());
                pairs += 1;
            }
        }
    }
    Ok(IntegrabilityReport {
        distribution: dist.name().to_string(),
        pairs,
        out_of_span,
        status: if k <= 1 {
            Status::Holds
        } else {
            Status::grade(out_of_span, tol)
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecompVerdict {
    ProperPRPseudoSlant { lambda: f64 },
    /// Both pieces present, slant piece invariant.
    PRSubmanifold,
    /// No anti-invariant piece, slant piece of coefficient `lambda`.
    Slant { lambda: f64 },
    Invariant,
    AntiInvariant,
    NotPRPseudoSlant,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompReport {
    pub anti_invariant: String,
    pub slant: String,
    pub d1: usize,
    pub d2: usize,
    pub orthogonality: f64,
    pub span_deficient_points: usize,
    pub projection_residual: f64,
    pub anti_class: SlantClass,
    pub slant_class: SlantClass,
    pub lambda: f64,
    pub proper: bool,
    pub verdict: DecompVerdict,
    pub checks: Vec<Check>,
}

/// Checks `TM = Dbot (+) Dlam` with `Dbot` anti-invariant and `Dlam` slant.
pub fn check_decomposition(
    frames: &[PointFrame],
    dbot: &Distribution,
    dlam: &Distribution,
    tol: &Tolerances,
) -> Result<(DecompReport, SlantReport, SlantReport), DistributionError> {
    let Some(first) = frames.first() else {
        return Err(DistributionError::NoSamplePoints);
    };
    let d = first.dim();
    let (d1, d2) = (dbot.rank(), dlam.rank());
    if d1 + d2 != d {
        return Err(DistributionError::DimensionMismatch(format!(
            "ranks {d1} + {d2} do not add up to d = {d}"
        )));
    }
    let mut orthogonality = 0.0_f64;
    let mut span_deficient_points = 0;
    let mut projection_residual = 0.0_f64;
    for f in frames {
        let bb = dbot.basis_at(f)?;
        let bl = dlam.basis_at(f)?;
        for x in bb.column_iter() {
            let tx = (f.tangent() * x).norm();
            for z in bl.column_iter() {
                let tz = (f.tangent() * z).norm();
                orthogonality = orthogonality.max(x.dot(&(f.metric() * z)).abs() / (tx * tz));
            }
        }
        let mut both = DMatrix::zeros(d, d);
        both.columns_mut(0, d1).copy_from(&bb);
        both.columns_mut(d1, d2).copy_from(&bl);
        if linalg::rank(&both, 1e-10) < d {
            span_deficient_points += 1;
            continue;
        }
        for i in 0..d {
            let e = TangentVec::coordinate(d, i).0;
            let r = project_onto(f, &bb, &e) + project_onto(f, &bl, &e) - &e;
            projection_residual = projection_residual.max(linalg::max_abs_vec(&r));
        }
    }
    let anti = slant_analyze(frames, dbot, tol.classification)?;
    let slant = slant_analyze(frames, dlam, tol.classification)?;
    let lambda = slant.lambda;
    let structural_ok = orthogonality <= tol.identity && span_deficient_points == 0;
    let anti_ok = d1 == 0 || anti.classification == SlantClass::AntiInvariant;
    let verdict = if !structural_ok || !anti_ok {
        DecompVerdict::NotPRPseudoSlant
    } else {
        match (d1, d2, slant.classification) {
            (_, 0, _) => DecompVerdict::AntiInvariant,
            (_, _, SlantClass::NotSlant) => DecompVerdict::NotPRPseudoSlant,
            (_, _, SlantClass::AntiInvariant) => DecompVerdict::AntiInvariant,
            (0, _, SlantClass::Invariant) => DecompVerdict::Invariant,
            (0, _, SlantClass::ProperSlant { lambda }) => DecompVerdict::Slant { lambda },
            (_, _, SlantClass::Invariant) => DecompVerdict::PRSubmanifold,
            (_, _, SlantClass::ProperSlant { lambda }) => {
                DecompVerdict::ProperPRPseudoSlant { lambda }
            }
        }
    };
    let proper = matches!(verdict, DecompVerdict::ProperPRPseudoSlant { .. });
    let checks = vec![
        Check::new(
            format!("{} and {} are g-orthogonal", dbot.name(), dlam.name()),
            orthogonality,
            tol.identity,
        ),
        Check::new(
            format!("{} + {} spans TM", dbot.name(), dlam.name()),
            span_deficient_points as f64,
            0.0,
        )
        .with_detail(format!("{span_deficient_points} rank-deficient points")),
        Check::new("complementary projections recompose", projection_residual, tol.identity),
    ];
    let report = DecompReport {
        anti_invariant: dbot.name().to_string(),
        slant: dlam.name().to_string(),
        d1,
        d2,
        orthogonality,
        span_deficient_points,
        projection_residual,
        anti_class: anti.classification,
        slant_class: slant.classification,
        lambda,
        proper,
        verdict,
        checks,
    };
    Ok((report, anti, slant))
}

/// Which of the four shape-operator conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Anti-invariant distribution integrable.
    AntiInvariantIntegrable,
    /// Slant distribution integrable.
    SlantIntegrable,
    /// Anti-invariant distribution defines a totally geodesic foliation.
    AntiInvariantGeodesic,
    /// Slant distribution defines a totally geodesic foliation.
    SlantGeodesic,
}

impl Condition {
    pub const ALL: [Condition; 4] = [
        Condition::AntiInvariantIntegrable,
        Condition::SlantIntegrable,
        Condition::AntiInvariantGeodesic,
        Condition::SlantGeodesic,
    ];

    pub fn statement(self) -> &'static str {
        match self {
            Condition::AntiInvariantIntegrable => "g(A_{PY}X, tZ) = g(A_{PX}Y, tZ)",
            Condition::SlantIntegrable => "g(A_{ntZ}X - A_{PX}tZ, W) = g(A_{ntW}X - A_{PX}tW, Z)",
            Condition::AntiInvariantGeodesic => "g(A_{PY}X, tZ) = g(A_{ntZ}X, Y)",
            Condition::SlantGeodesic => "g(A_{ntW}Z, X) = g(A_{PX}Z, tW)",
        }
    }

    pub fn oracle(self) -> &'static str {
        match self {
            Condition::AntiInvariantIntegrable => "g([X,Y], Z)",
            Condition::SlantIntegrable => "g([Z,W], X)",
            Condition::AntiInvariantGeodesic => "g(nabla_X Y, Z)",
            Condition::SlantGeodesic => "g(nabla_Z W, X)",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Condition::AntiInvariantIntegrable => "anti-invariant distribution integrable",
            Condition::SlantIntegrable => "slant distribution integrable",
            Condition::AntiInvariantGeodesic => "anti-invariant distribution totally geodesic",
            Condition::SlantGeodesic => "slant distribution totally geodesic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub statement: String,
    pub oracle_quantity: String,
    pub lambda: f64,
    /// `max |lambda * oracle - (lhs - rhs)|`.
    pub identity_residual: f64,
    /// `max |lhs - rhs|` of the printed condition.
    pub condition_residual: f64,
    /// `max |oracle|`.
    pub oracle_residual: f64,
    pub condition_status: Status,
    pub oracle_status: Status,
    pub agree: Option<bool>,
    pub checks: Vec<Check>,
}

/// Per-point ingredients shared by the four conditions.
struct Ingredients<'a> {
    frame: &'a PointFrame,
    /// Anti-invariant generators: jets, tangent coefficients, `P X` ambient.
    bot: Vec<(FieldJet, TangentVec, DVector<f64>)>,
    /// Slant generators: jets, coefficients, `tZ`, `n t Z` ambient.
    lam: Vec<(FieldJet, TangentVec, TangentVec, DVector<f64>)>,
}

impl<'a> Ingredients<'a> {
    fn new(
        frame: &'a PointFrame,
        dbot: &Distribution,
        dlam: &Distribution,
    ) -> Result<Ingredients<'a>, DistributionError> {
        dbot.basis_at(frame)?;
        dlam.basis_at(frame)?;
        let tn = tn_decompose(frame);
        let p = frame.ambient().structure();
        let bot = dbot
            .jets_at(frame)?
            .into_iter()
            .map(|j| {
                let x = TangentVec(j.value.clone());
                let px = p * frame.tangent_ambient(&x);
                (j, x, px)
            })
            .collect();
        let lam = dlam
            .jets_at(frame)?
            .into_iter()
            .map(|j| {
                let z = TangentVec(j.value.clone());
                let tz = tn.t(&z);
                let ntz = frame.normal_ambient(&tn.n(&tz));
                (j, z, tz, ntz)
            })
            .collect();
        Ok(Ingredients { frame, bot, lam })
    }

    /// `g(A_zeta X, Y) = <h(X, Y), zeta>`.
    fn a(&self, zeta: &DVector<f64>, x: &TangentVec, y: &TangentVec) -> f64 {
        self.frame.sff_pairing(x, y, zeta)
    }

    /// `(lhs - rhs, oracle)` for every generator combination.
    fn terms(&self, c: Condition) -> Vec<(f64, f64)> {
        let f = self.frame;
        let mut out = Vec::new();
        match c {
            Condition::AntiInvariantIntegrable => {
                for (jx, x, px) in &self.bot {
                    for (jy, y, py) in &self.bot {
                        for (_, z, tz, _) in &self.lam {
                            let cond = self.a(py, x, tz) - self.a(px, y, tz);
                            out.push((cond, f.g(&lie_bracket(jx, jy), z)));
                        }
                    }
                }
            }
            Condition::SlantIntegrable => {
                for (_, x, px) in &self.bot {
                    for (jz, z, tz, ntz) in &self.lam {
                        for (jw, w, tw, ntw) in &self.lam {
                            let lhs = self.a(ntz, x, w) - self.a(px, tz, w);
                            let rhs = self.a(ntw, x, z) - self.a(px, tw, z);
                            out.push((rhs - lhs, f.g(&lie_bracket(jz, jw), x)));
                        }
                    }
                }
            }
            Condition::AntiInvariantGeodesic => {
                for (jx, x, _) in &self.bot {
                    for (jy, y, py) in &self.bot {
                        for (_, z, tz, ntz) in &self.lam {
                            let cond = self.a(py, x, tz) - self.a(ntz, x, y);
                            out.push((cond, f.g(&f.connection(jx, jy), z)));
                        }
                    }
                }
            }
            Condition::SlantGeodesic => {
                for (jz, z, _, _) in &self.lam {
                    for (jw, _, tw, ntw) in &self.lam {
                        for (_, x, px) in &self.bot {
                            let cond = self.a(ntw, z, x) - self.a(px, z, tw);
                            out.push((cond, f.g(&f.connection(jz, jw), x)));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Evaluates one printed condition, its oracle and the identity tying them.
pub fn condition_report(
    frames: &[PointFrame],
    dbot: &Distribution,
    dlam: &Distribution,
    lambda: f64,
    which: Condition,
    tol: &Tolerances,
) -> Result<ConditionReport, DistributionError> {
    if frames.is_empty() {
        return Err(DistributionError::NoSamplePoints);
    }
    let (mut idr, mut cr, mut or) = (0.0_f64, 0.0_f64, 0.0_f64);
    for f in frames {
        let ing = Ingredients::new(f, dbot, dlam)?;
        for (cond, oracle) in ing.terms(which) {
            idr = idr.max((lambda * oracle - cond).abs());
            cr = cr.max(cond.abs());
            or = or.max(oracle.abs());
        }
    }
    let name = which.label();
    let empty = dbot.rank() == 0 || dlam.rank() == 0;
    let degenerate_lambda = lambda.abs() <= tol.classification;
    let (condition_status, oracle_status, agree) = if empty {
        (Status::Vacuous, Status::Vacuous, None)
    } else {
        let cs = Status::grade(cr, tol);
        let os = Status::grade(or, tol);
        if degenerate_lambda {
            (Status::Vacuous, os, None)
        } else {
            (cs, os, Some(cs == os))
        }
    };
    let mut checks = Vec::new();
    if empty {
        checks.push(Check::vacuous(
            format!("{name}: lambda * {} = condition difference", which.oracle()),
            "one of the distributions is empty",
        ));
    } else {
        checks.push(Check::new(
            format!("{name}: lambda * {} = condition difference", which.oracle()),
            idr,
            tol.identity,
        ));
    }
    checks.push(match agree {
        Some(a) => Check::new(
            format!("{name}: printed condition agrees with oracle"),
            if a { 0.0 } else { 1.0 },
            0.0,
        )
        .with_detail(format!(
            "condition {condition_status:?} ({cr:.3e}), oracle {oracle_status:?} ({or:.3e})"
        )),
        None => Check::vacuous(
            format!("{name}: printed condition agrees with oracle"),
            if empty {
                "one of the distributions is empty"
            } else {
                "slant coefficient is zero, the condition carries no information"
            },
        ),
    });
    Ok(ConditionReport {
        condition: which,
        statement: which.statement().to_string(),
        oracle_quantity: which.oracle().to_string(),
        lambda,
        identity_residual: idr,
        condition_residual: cr,
        oracle_residual: or,
        condition_status,
        oracle_status,
        agree,
        checks,
    })
}

pub fn lemma_condition_dbot_integrable(
    frames: &[PointFrame],
    dbot: &Distribution,
    dlam: &Distribution,
    lambda: f64,
    tol: &Tolerances,
) -> Result<ConditionReport, DistributionError> {
    condition_report(frames, dbot, dlam, lambda, Condition::AntiInvariantIntegrable, tol)
}

pub fn lemma_condition_dlam_integrable(
    frames: &[PointFrame],
    dbot: &Distribution,
    dlam: &Distribution,
    lambda: f64,
    tol: &Tolerances,
) -> Result<ConditionReport, DistributionError> {
    condition_report(frames, dbot, dlam, lambda, Condition::SlantIntegrable, tol)
}

pub fn foliation_condition_dbot(
    frames: &[PointFrame],
    dbot: &Distribution,
    dlam: &Distribution,
    lambda: f64,
    tol: &Tolerances,
) -> Result<ConditionReport, DistributionError> {
    condition_report(frames, dbot, dlam, lambda, Condition::AntiInvariantGeodesic, tol)
}

pub fn foliation_condition_dlam(
    frames: &[PointFrame],
    dbot: &Distribution,
    dlam: &Distribution,
    lambda: f64,
    tol: &Tolerances,
) -> Result<ConditionReport, DistributionError> {
    condition_report(frames, dbot, dlam, lambda, Condition::SlantGeodesic, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::AmbientSpace;
    use crate::submanifold::{Immersion, SamplePlan};

    fn cone() -> Immersion {
        let mut m = Immersion::from_sources(
            AmbientSpace::canonical(3),
            &["x1", "x1*cos(x2)", "x1*sin(x2)", "x3", "1.5", "-0.5"],
            vec![0.5, 0.1, 0.5],
            vec![2.0, 1.4, 2.0],
        )
        .unwrap();
        m.set_samples(SamplePlan { grid: 3, random: 3, seed: 5 });
        m
    }

    fn pieces() -> (Distribution, Distribution) {
        (
            Distribution::coordinate("Dbot", 3, &[1]),
            Distribution::coordinate("Dlam", 3, &[0, 2]),
        )
    }

    #[test]
    fn cone_is_proper_pseudo_slant() {
        let s = cone().sample();
        let (b, l) = pieces();
        let (r, _, _) = check_decomposition(&s.frames, &b, &l, &Tolerances::default()).unwrap();
        match r.verdict {
            DecompVerdict::ProperPRPseudoSlant { lambda } => assert!((lambda - 0.5).abs() < 1e-12),
            v => panic!("{v:?}"),
        }
        assert!(r.proper);
        assert!(r.checks.iter().all(|c| c.verdict == Verdict::Pass));
    }

    #[test]
    fn same_span_is_not_orthogonal() {
        let s = cone().sample();
        let a = Distribution::coordinate("a", 3, &[0]);
        let b = Distribution::coordinate("b", 3, &[0, 2]);
        let (r, _, _) = check_decomposition(&s.frames, &a, &b, &Tolerances::default()).unwrap();
        assert_eq!(r.verdict, DecompVerdict::NotPRPseudoSlant);
        assert_eq!(r.checks[0].verdict, Verdict::Fail);
    }

    #[test]
    fn invariant_plane_has_empty_anti_invariant_part() {
        let m = Immersion::from_sources(
            AmbientSpace::canonical(2),
            &["x1", "0", "x2", "0"],
            vec![-1.0, -1.0],
            vec![1.0, 1.0],
        )
        .unwrap();
        let s = m.sample();
        let b = Distribution::new("none", vec![]);
        let l = Distribution::coordinate("all", 2, &[0, 1]);
        let (r, _, _) = check_decomposition(&s.frames, &b, &l, &Tolerances::default()).unwrap();
        assert_eq!(r.verdict, DecompVerdict::Invariant);
    }

    #[test]
    fn projections() {
        let m = cone();
        let f = m.frame_at(&[1.0, 0.5, 1.0]).unwrap();
        let (b, l) = pieces();
        let e3 = TangentVec::coordinate(3, 2);
        assert!((l.project(&f, &e3).unwrap().0 - &e3.0).norm() < 1e-15);
        let x = TangentVec(DVector::from_vec(vec![0.3, -1.2, 2.5]));
        let sum = b.project(&f, &x).unwrap().0 + l.project(&f, &x).unwrap().0;
        assert!((sum - &x.0).norm() < 1e-14);
    }

    #[test]
    fn brackets_out_of_span() {
        let m = Immersion::from_sources(
            AmbientSpace::canonical(3),
            &["x1", "x2", "x3", "0", "0", "0"],
            vec![-1.0, -1.0, -1.0],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap();
        let s = m.sample();
        let tol = Tolerances::default();
        let d = Distribution::parse("a", &[&["1", "x1", "0"], &["0", "0", "1"]], 3).unwrap();
        let r = integrability_test(&s.frames, &d, &tol).unwrap();
        assert_eq!(r.out_of_span, 0.0);
        assert_eq!(r.status, Status::Holds);

        let d = Distribution::parse("b", &[&["1", "x3", "0"], &["0", "0", "1"]], 3).unwrap();
        let r = integrability_test(&s.frames, &d, &tol).unwrap();
        // out-of-span part of d_2 against span((1, x3, 0), (0, 0, 1))
        let expected = s
            .frames
            .iter()
            .map(|f| 1.0 / (1.0 + f.point()[2].powi(2)).sqrt())
            .fold(0.0, f64::max);
        assert!((r.out_of_span - expected).abs() < 1e-12);
        assert_eq!(r.status, Status::DoesNotHold);
    }

    #[test]
    fn cone_conditions_match_oracles() {
        let s = cone().sample();
        let (b, l) = pieces();
        let tol = Tolerances::default();
        for c in Condition::ALL {
            let r = condition_report(&s.frames, &b, &l, 0.5, c, &tol).unwrap();
            assert!(r.identity_residual < 1e-10, "{c:?}: {}", r.identity_residual);
            assert_eq!(r.agree, Some(true), "{c:?}");
        }
        let r = foliation_condition_dbot(&s.frames, &b, &l, 0.5, &tol).unwrap();
        assert_eq!(r.oracle_status, Status::DoesNotHold);
        let r = foliation_condition_dlam(&s.frames, &b, &l, 0.5, &tol).unwrap();
        assert_eq!(r.oracle_status, Status::Holds);
    }
}
