//! The analysis pipeline behind every command, and the text rendering of its
//! report.

use std::fmt::Write as _;

use thiserror::Error;

use crate::distributions::{self, check_decomposition, integrability_test, Condition, Distribution};
use crate::parastructure::{self, SlantClass};
use crate::report::{
    AnalysisReport, Check, Discrepancy, MetricReport, SampleDiagnostics, SlantSection, Verdict,
    WarpedSection,
};
use crate::scene::{Scene, StatedQuantity, WarpedDecl};
use crate::submanifold::{self, PointFrame};
use crate::tolerances::Tolerances;
use crate::warped::{self, Orientation, TrivialityReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    VerifyAmbient,
    Analyze,
    CheckSlant(String),
    CheckWarped(String),
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::VerifyAmbient => "verify-ambient".into(),
            Command::Analyze => "analyze".into(),
            Command::CheckSlant(d) => format!("check-slant {d}"),
            Command::CheckWarped(w) => format!("check-warped {w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("scene has no distribution named {0:?}")]
    UnknownDistribution(String),
    #[error("scene has no warped declaration named {0:?}")]
    UnknownWarped(String),
}

/// Runs `command` on `scene`. Numerical guard failures are recorded in
/// `errors` rather than returned.
pub fn run(scene: &Scene, command: &Command) -> Result<AnalysisReport, AnalysisError> {
    match command {
        Command::CheckSlant(d) if scene.distribution(d).is_none() => {
            return Err(AnalysisError::UnknownDistribution(d.clone()))
        }
        Command::CheckWarped(w) if scene.warped_decl(w).is_none() => {
            return Err(AnalysisError::UnknownWarped(w.clone()))
        }
        _ => {}
    }
    let tol = scene.tolerances;
    let amb = scene.immersion.ambient();
    let mut r = AnalysisReport::new(&scene.name, &command.name(), amb.verify_structure(tol.identity));
    if *command == Command::VerifyAmbient {
        r.finalize();
        return Ok(r);
    }

    let sample = scene.immersion.sample();
    r.samples = Some(SampleDiagnostics {
        planned: sample.frames.len() + sample.skipped.len(),
        evaluated: sample.frames.len(),
        skipped: sample.skipped,
    });
    let frames = sample.frames;
    if frames.is_empty() {
        r.errors.push("no sample point passed the frame guards".into());
        r.finalize();
        return Ok(r);
    }

    match command {
        Command::Analyze => {
            metric(scene, &frames, &mut r);
            let suite = submanifold::identity_suite(&frames, tol.identity);
            r.submanifold_checks = suite.checks;
            r.recomposition = Some(parastructure::recomposition_report(&frames, tol.identity));
            r.domega = Some(parastructure::domega_report(&frames, tol.identity));
            for d in &scene.distributions {
                slant_section(scene, &frames, d, &mut r);
            }
            for d in &scene.distributions {
                match integrability_test(&frames, d, &tol) {
                    Ok(i) => r.integrability.push(i),
                    Err(e) => r.errors.push(format!("integrability of {}: {e}", d.name())),
                }
            }
            let lambda = decomposition(scene, &frames, &mut r);
            if let (Some(lambda), Some((dbot, dlam))) = (lambda, scene.decomposition_pair()) {
                for c in Condition::ALL {
                    match distributions::condition_report(&frames, dbot, dlam, lambda, c, &tol) {
                        Ok(c) => r.conditions.push(c),
                        Err(e) => r.errors.push(format!("{}: {e}", c.label())),
                    }
                }
            }
            for w in &scene.warped {
                warped_section(scene, &frames, w, lambda, &mut r);
            }
        }
        Command::CheckSlant(name) => {
            let d = scene.distribution(name).expect("checked above");
            slant_section(scene, &frames, d, &mut r);
        }
        Command::CheckWarped(name) => {
            let w = scene.warped_decl(name).expect("checked above");
            let lambda = match w.orientation {
                Some(_) => decomposition(scene, &frames, &mut r),
                None => None,
            };
            warped_section(scene, &frames, w, lambda, &mut r);
        }
        Command::VerifyAmbient => unreachable!(),
    }
    r.finalize();
    Ok(r)
}

fn metric(scene: &Scene, frames: &[PointFrame], r: &mut AnalysisReport) {
    let Some(exp) = &scene.expected_metric else {
        return;
    };
    let mut worst = 0.0_f64;
    for f in frames {
        match exp.eval(f.point()) {
            Ok(g) => worst = worst.max(crate::linalg::max_abs(&(f.metric() - g))),
            Err(e) => {
                r.errors.push(format!("expected metric at {:?}: {e}", f.point()));
                return;
            }
        }
    }
    r.metric = Some(MetricReport {
        entries: exp.sources.clone(),
        check: Some(Check::new("induced metric matches the expected entries", worst, scene.tolerances.identity)),
    });
}

fn slant_section(scene: &Scene, frames: &[PointFrame], d: &Distribution, r: &mut AnalysisReport) {
    let tol = scene.tolerances;
    let slant = match parastructure::slant_analyze(frames, d, tol.classification) {
        Ok(s) => s,
        Err(e) => {
            r.errors.push(format!("slant analysis of {}: {e}", d.name()));
            return;
        }
    };
    for s in scene.stated.iter().filter(|s| s.target == d.name()) {
        match s.quantity {
            StatedQuantity::Lambda => {
                if (s.value - slant.lambda).abs() > tol.classification {
                    r.discrepancies.push(Discrepancy {
                        quantity: format!("slant coefficient of {}", d.name()),
                        stated: format!("{} = {}", s.text, s.value),
                        computed: format!("{}", slant.lambda),
                        note: "computed from t^2 = lambda I on the distribution".into(),
                    });
                }
            }
        }
    }
    let lambda = match slant.classification {
        SlantClass::Invariant => Some(1.0),
        SlantClass::AntiInvariant => Some(0.0),
        SlantClass::ProperSlant { lambda } => Some(lambda),
        SlantClass::NotSlant => None,
    };
    let identities = match lambda {
        Some(l) if d.rank() > 0 => match parastructure::verify_t_identities(frames, d, l, tol.identity) {
            Ok(t) => Some(t),
            Err(e) => {
                r.errors.push(format!("t identities on {}: {e}", d.name()));
                None
            }
        },
        _ => None,
    };
    if let Some(t) = &identities {
        for (what, stated, id) in [
            ("g(tX, tY)", "lambda g(X,Y)", &t.metric_t),
            ("<nX, nY>", "(1 - lambda) g(X,Y)", &t.metric_n),
        ] {
            if !id.agrees_with_statement() {
                r.discrepancies.push(Discrepancy {
                    quantity: format!("{what} on {}", d.name()),
                    stated: stated.into(),
                    computed: format!("-{stated} (residual {:.3e})", id.residual),
                    note: format!(
                        "the stated sign leaves a residual of {:.3e}",
                        id.stated_residual
                    ),
                });
            }
        }
    }
    r.slant.push(SlantSection { slant, identities });
}

/// Runs the decomposition check and returns the slant coefficient.
fn decomposition(scene: &Scene, frames: &[PointFrame], r: &mut AnalysisReport) -> Option<f64> {
    let (dbot, dlam) = scene.decomposition_pair()?;
    match check_decomposition(frames, dbot, dlam, &scene.tolerances) {
        Ok((d, _, _)) => {
            let l = d.lambda;
            r.decomposition = Some(d);
            Some(l)
        }
        Err(e) => {
            r.errors.push(format!("decomposition: {e}"));
            None
        }
    }
}

fn triviality_discrepancy(t: &TrivialityReport, tol: &Tolerances) -> Option<Discrepancy> {
    if t.stated_sum <= tol.identity {
        return None;
    }
    Some(Discrepancy {
        quantity: "triviality identity".into(),
        stated: "lambda (Z ln f) g(X,Y) + <h(X,Y), ntZ> = 0".into(),
        computed: format!(
            "the sum reaches {:.6e}; measured sign {} with residual {:.3e}",
            t.stated_sum, t.sign.measured_sign, t.sign.residual
        ),
        note: format!(
            "lambda (Z ln f) g(X,Y) = <h(X,Y), ntZ> - <h(X,tZ), PY> holds to {:.3e}",
            t.full_identity
        ),
    })
}

fn warped_section(
    scene: &Scene,
    frames: &[PointFrame],
    w: &WarpedDecl,
    lambda: Option<f64>,
    r: &mut AnalysisReport,
) {
    let tol = scene.tolerances;
    let mut sec = WarpedSection {
        name: w.name.clone(),
        orientation: w.orientation.map(|o| o.name().to_string()).unwrap_or_else(|| "none".into()),
        split: None,
        error: None,
        detection: None,
        connection: None,
        obstruction: None,
        characterization: None,
        triviality: None,
    };
    let split = warped::detect_warped(&scene.immersion, frames, &w.base, &w.fiber, w.f.as_ref(), &tol);
    let split = match split {
        Ok(s) => Some(s),
        Err(e) => {
            let guard = matches!(e, warped::WarpedError::Geometry(_) | warped::WarpedError::Distribution(_));
            if guard {
                r.errors.push(format!("warped {}: {e}", w.name));
            }
            sec.error = Some(e.to_string());
            sec.detection = Some(
                Check::new("declared split is a warped product", 1.0, 0.0)
                    .with_verdict(if guard { Verdict::Inconclusive } else { Verdict::Fail })
                    .with_detail(e.to_string()),
            );
            None
        }
    };
    if let Some(s) = &split {
        sec.connection = Some(warped::verify_warped_connection(frames, s, &tol));
    }
    let pieces = scene.decomposition_pair();
    match (w.orientation, lambda, pieces) {
        (Some(Orientation::AntiInvariantBase), Some(l), Some((dbot, dlam))) => {
            match warped::nonexistence_obstruction(frames, dbot, dlam, l, w.f.as_ref(), split.as_ref(), &tol) {
                Ok(o) => sec.obstruction = Some(o),
                Err(e) => r.errors.push(format!("warped {}: {e}", w.name)),
            }
        }
        (Some(Orientation::SlantBase), Some(l), Some((dbot, dlam))) => {
            if let Some(s) = &split {
                match warped::characterization_test(frames, dbot, dlam, l, s, &tol) {
                    Ok(c) => sec.characterization = Some(c),
                    Err(e) => r.errors.push(format!("warped {}: {e}", w.name)),
                }
                match warped::triviality_test(frames, dbot, dlam, l, s, &tol) {
                    Ok(t) => {
                        r.discrepancies.extend(triviality_discrepancy(&t, &tol));
                        sec.triviality = Some(t);
                    }
                    Err(e) => r.errors.push(format!("warped {}: {e}", w.name)),
                }
            }
        }
        (Some(_), None, _) | (Some(_), _, None) => {
            r.errors.push(format!("warped {}: no slant coefficient from the decomposition", w.name))
        }
        (None, _, _) => {}
    }
    sec.split = split;
    r.warped.push(sec);
}

fn fmt_checks(out: &mut String, checks: &[Check]) {
    for c in checks {
        let _ = write!(out, "  {:<13} {:<60} {:>10.3e}", c.verdict.to_string(), c.name, c.residual);
        if c.verdict != Verdict::Vacuous {
            let _ = write!(out, "  (tol {:.0e})", c.tolerance);
        }
        if !c.detail.is_empty() {
            let _ = write!(out, "  {}", c.detail);
        }
        out.push('\n');
    }
}

fn class_text(c: &SlantClass) -> String {
    match c {
        SlantClass::Invariant => "invariant".into(),
        SlantClass::AntiInvariant => "anti-invariant".into(),
        SlantClass::ProperSlant { lambda } => format!("proper slant, lambda = {lambda:.12}"),
        SlantClass::NotSlant => "not slant".into(),
    }
}

/// Human-readable report.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "parageo {}  scene {}  command {}", r.tool_version, r.scene, r.command);
    let s = &r.structure;
    let _ = writeln!(
        o,
        "\nambient R^{}: P^2 - I {:.1e}, P^T G P + G {:.1e}, G - G^T {:.1e}, signature ({}, {})  {}",
        s.dimension,
        s.product_residual,
        s.compatibility_residual,
        s.symmetry_residual,
        s.positive,
        s.negative,
        if s.pass { "PASS" } else { "FAIL" }
    );
    if let Some(sd) = &r.samples {
        let _ = writeln!(o, "samples: {} planned, {} evaluated, {} skipped", sd.planned, sd.evaluated, sd.skipped.len());
        for k in sd.skipped.iter().take(5) {
            let _ = writeln!(o, "  skipped #{} {:?}: {}", k.index, k.point, k.reason);
        }
        if sd.skipped.len() > 5 {
            let _ = writeln!(o, "  ... {} more", sd.skipped.len() - 5);
        }
    }
    if let Some(m) = &r.metric {
        let rows: Vec<String> = m.entries.iter().map(|row| row.join(", ")).collect();
        let _ = writeln!(o, "\ninduced metric, expected [{}]", rows.join("; "));
        fmt_checks(&mut o, m.check.as_slice());
    }
    if !r.submanifold_checks.is_empty() {
        o.push_str("\nframe identities\n");
        fmt_checks(&mut o, &r.submanifold_checks);
    }
    if let Some(rc) = &r.recomposition {
        fmt_checks(&mut o, &rc.checks);
    }
    if let Some(d) = &r.domega {
        let _ = writeln!(o, "  d omega over {} coordinate triples", d.triples);
        fmt_checks(&mut o, std::slice::from_ref(&d.check));
    }
    for sec in &r.slant {
        let sl = &sec.slant;
        let _ = write!(o, "\n{} (rank {}): {}", sl.distribution, sl.rank, class_text(&sl.classification));
        if let Some(a) = sl.angle_degrees {
            let _ = write!(o, ", angle {a:.6} deg");
        }
        let _ = writeln!(
            o,
            "\n  lambda fit {:.12}, spread {:.1e}, max |tX|/|X| {:.3e}, max |nX|/|X| {:.3e}",
            sl.lambda, sl.spread, sl.max_t_ratio, sl.max_n_ratio
        );
        fmt_checks(&mut o, &sl.checks);
        if let Some(t) = &sec.identities {
            let _ = writeln!(
                o,
                "  measured signs: g(tX,tY) = {:+} lambda g(X,Y), <nX,nY> = {:+} (1 - lambda) g(X,Y)",
                t.metric_t.measured_sign, t.metric_n.measured_sign
            );
            fmt_checks(&mut o, &t.checks);
        }
    }
    if !r.integrability.is_empty() {
        o.push_str("\nintegrability (bracket outside the span)\n");
        for i in &r.integrability {
            let _ = writeln!(o, "  {:<13} {:<60} {:>10.3e}", format!("{:?}", i.status), i.distribution, i.out_of_span);
        }
    }
    if let Some(d) = &r.decomposition {
        let _ = writeln!(
            o,
            "\ndecomposition {} (+) {}: d1 = {}, d2 = {}, verdict {:?}",
            d.anti_invariant, d.slant, d.d1, d.d2, d.verdict
        );
        fmt_checks(&mut o, &d.checks);
    }
    if !r.conditions.is_empty() {
        o.push_str("\nconditions (printed condition / direct oracle)\n");
        for c in &r.conditions {
            let agree = match c.agree {
                Some(true) => "agree",
                Some(false) => "DISAGREE",
                None => "n/a",
            };
            let _ = writeln!(
                o,
                "  {:<26} {:?} / {:?}  {}  [{}]",
                c.condition.label(),
                c.condition_status,
                c.oracle_status,
                agree,
                c.statement
            );
            fmt_checks(&mut o, &c.checks);
        }
    }
    for w in &r.warped {
        let _ = writeln!(o, "\nwarped {} ({})", w.name, w.orientation);
        if let Some(e) = &w.error {
            let _ = writeln!(o, "  not a warped product over this split: {e}");
        }
        fmt_checks(&mut o, w.detection.as_slice());
        if let Some(s) = &w.split {
            let _ = write!(o, "  base {:?}, fiber {:?}, f at reference base point = 1", s.base_vars, s.fiber_vars);
            if let (Some(c), Some(k)) = (&s.candidate, s.candidate_ratio) {
                let _ = write!(o, ", f = {c} / {k:.12}");
            }
            let _ = writeln!(o, "{}", if s.trivial { ", f constant (trivial)" } else { "" });
            fmt_checks(&mut o, &s.checks);
        }
        if let Some(c) = &w.connection {
            fmt_checks(&mut o, &c.checks);
        }
        if let Some(ob) = &w.obstruction {
            let _ = writeln!(o, "  obstruction: {:?}", ob.verdict);
            fmt_checks(&mut o, &ob.checks);
        }
        if let Some(c) = &w.characterization {
            fmt_checks(&mut o, &c.checks);
        }
        if let Some(t) = &w.triviality {
            let _ = writeln!(
                o,
                "  {} product: max |<h(X,Y), ntZ>| = {:.3e}",
                if t.trivial { "trivial" } else { "non-trivial" },
                t.criterion_term
            );
            fmt_checks(&mut o, &t.checks);
        }
    }
    if !r.discrepancies.is_empty() {
        o.push_str("\ndiscrepancies\n");
        for d in &r.discrepancies {
            let _ = writeln!(o, "  {}: stated {}, computed {}; {}", d.quantity, d.stated, d.computed, d.note);
        }
    }
    if !r.errors.is_empty() {
        o.push_str("\nerrors\n");
        for e in &r.errors {
            let _ = writeln!(o, "  {e}");
        }
    }
    let s = r.summary;
    let _ = writeln!(
        o,
        "\nsummary: {} pass, {} fail, {} inconclusive, {} vacuous",
        s.pass, s.fail, s.inconclusive, s.vacuous
    );
    o
}
