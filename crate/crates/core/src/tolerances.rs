//! Default thresholds shared by the analysis stages.

use serde::{Deserialize, Serialize};

/// Residual below which an identity counts as holding.
pub const IDENTITY: f64 = 1e-8;
/// Threshold for the invariant / anti-invariant / slant classification.
pub const CLASSIFICATION: f64 = 1e-8;
/// Residual above which a condition is a structural failure.
pub const STRUCTURAL: f64 = 1e-3;
/// Relative deviation of `t^2` from a multiple of the identity tolerated
/// before a distribution is declared not slant.
pub const SLANT_DEVIATION: f64 = 1e-6;
/// Eigenvalue magnitude below which the ambient metric counts as singular.
pub const SIGNATURE_EIGEN: f64 = 1e-10;
/// Hadamard-normalised determinant below which a Gram matrix is degenerate.
pub const DEGENERACY: f64 = 1e-10;

/// The three thresholds a scene may override.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub identity: f64,
    pub classification: f64,
    pub structural: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: IDENTITY,
            classification: CLASSIFICATION,
            structural: STRUCTURAL,
        }
    }
}

/// Threshold at which a printed condition and its direct oracle are graded
/// before their verdicts are compared.
pub const AGREEMENT: f64 = 1e-7;
