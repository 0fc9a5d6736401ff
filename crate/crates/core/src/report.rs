//! Verdicts, residual checks and the assembled analysis report.

use std::fmt;

use serde::Serialize;

use crate::ambient::StructureReport;
use crate::distributions::{ConditionReport, DecompReport, IntegrabilityReport};
use crate::parastructure::{DomegaReport, RecompositionReport, SlantReport, TIdentityReport};
use crate::submanifold::SkippedPoint;
use crate::warped::{
    CharacterizationReport, ObstructionReport, TrivialityReport, WarpedConnectionReport,
    WarpedSplit,
};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    Vacuous,
}

impl Verdict {
    /// Pass at or below `pass`, Fail at or above `fail`, Inconclusive between.
    pub fn grade(residual: f64, pass: f64, fail: f64) -> Verdict {
        if residual.is_nan() {
            Verdict::Fail
        } else if residual <= pass {
            Verdict::Pass
        } else if residual >= fail {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    }

    /// Pass or Fail with no grey zone.
    pub fn within(residual: f64, tol: f64) -> Verdict {
        if residual <= tol {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Vacuous => "VACUOUS",
        };
        f.write_str(s)
    }
}

/// One named residual with its tolerance and verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            residual,
            tolerance,
            verdict: Verdict::within(residual, tolerance),
            detail: String::new(),
        }
    }

    pub fn vacuous(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            residual: 0.0,
            tolerance: 0.0,
            verdict: Verdict::Vacuous,
            detail: detail.into(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = detail.into();
        self
    }

    pub fn with_verdict(mut self, verdict: Verdict) -> Check {
        self.verdict = verdict;
        self
    }
}

/// A stated value that disagrees with what was computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discrepancy {
    pub quantity: String,
    pub stated: String,
    pub computed: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleDiagnostics {
    pub planned: usize,
    pub evaluated: usize,
    pub skipped: Vec<SkippedPoint>,
}

/// Closed-form metric entries checked against the computed metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub entries: Vec<Vec<String>>,
    pub check: Option<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlantSection {
    pub slant: SlantReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identities: Option<TIdentityReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WarpedSection {
    pub name: String,
    pub orientation: String,
    pub split: Option<WarpedSplit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Set when detection fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection: Option<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connection: Option<WarpedConnectionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characterization: Option<CharacterizationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triviality: Option<TrivialityReport>,
}

/// Everything one run produced; field order is the serialisation order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub report_version: u32,
    pub tool_version: String,
    pub scene: String,
    pub command: String,
    pub structure: StructureReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<SampleDiagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricReport>,
    pub submanifold_checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recomposition: Option<RecompositionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domega: Option<DomegaReport>,
    pub slant: Vec<SlantSection>,
    pub integrability: Vec<IntegrabilityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompReport>,
    pub conditions: Vec<ConditionReport>,
    pub warped: Vec<WarpedSection>,
    pub discrepancies: Vec<Discrepancy>,
    pub errors: Vec<String>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub vacuous: usize,
}

impl Summary {
    pub fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail => self.fail += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
            Verdict::Vacuous => self.vacuous += 1,
        }
    }
}

impl AnalysisReport {
    pub fn new(scene: &str, command: &str, structure: StructureReport) -> AnalysisReport {
        AnalysisReport {
            report_version: REPORT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            scene: scene.to_string(),
            command: command.to_string(),
            structure,
            samples: None,
            metric: None,
            submanifold_checks: Vec::new(),
            recomposition: None,
            domega: None,
            slant: Vec::new(),
            integrability: Vec::new(),
            decomposition: None,
            conditions: Vec::new(),
            warped: Vec::new(),
            discrepancies: Vec::new(),
            errors: Vec::new(),
            summary: Summary::default(),
        }
    }

    /// Every check in report order.
    pub fn checks(&self) -> Vec<&Check> {
        let mut out: Vec<&Check> = Vec::new();
        out.extend(self.metric.iter().filter_map(|m| m.check.as_ref()));
        out.extend(self.submanifold_checks.iter());
        if let Some(r) = &self.recomposition {
            out.extend(r.checks.iter());
        }
        if let Some(r) = &self.domega {
            out.push(&r.check);
        }
        for s in &self.slant {
            out.extend(s.slant.checks.iter());
            if let Some(i) = &s.identities {
                out.extend(i.checks.iter());
            }
        }
        if let Some(d) = &self.decomposition {
            out.extend(d.checks.iter());
        }
        for c in &self.conditions {
            out.extend(c.checks.iter());
        }
        for w in &self.warped {
            out.extend(w.detection.iter());
            if let Some(s) = &w.split {
                out.extend(s.checks.iter());
            }
            if let Some(c) = &w.connection {
                out.extend(c.checks.iter());
            }
            if let Some(o) = &w.obstruction {
                out.extend(o.checks.iter());
            }
            if let Some(c) = &w.characterization {
                out.extend(c.checks.iter());
            }
            if let Some(t) = &w.triviality {
                out.extend(t.checks.iter());
            }
        }
        out
    }

    pub fn finalize(&mut self) {
        let mut s = Summary::default();
        s.add(Verdict::within(
            if self.structure.pass { 0.0 } else { 1.0 },
            0.5,
        ));
        for c in self.checks() {
            s.add(c.verdict);
        }
        self.summary = s;
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    /// Pretty JSON; the same report always serialises to the same bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        crate::analysis::render_text(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grading_bands() {
        assert_eq!(Verdict::grade(1e-12, 1e-8, 1e-3), Verdict::Pass);
        assert_eq!(Verdict::grade(1e-5, 1e-8, 1e-3), Verdict::Inconclusive);
        assert_eq!(Verdict::grade(0.2, 1e-8, 1e-3), Verdict::Fail);
        assert_eq!(Verdict::grade(f64::NAN, 1e-8, 1e-3), Verdict::Fail);
        assert_eq!(Verdict::within(2e-8, 1e-8), Verdict::Fail);
    }
}
