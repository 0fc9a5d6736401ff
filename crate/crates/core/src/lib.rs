//! Numerical tensor calculus on submanifolds of flat para-Kähler spaces.
//!
//! An immersion is described by coordinate expressions in a few parameters.
//! From their 2-jets the crate builds tangent frames, induced metrics, normal
//! complements and second fundamental forms, splits the product structure
//! into its tangential and normal parts, classifies slant and anti-invariant
//! distributions, and checks integrability, foliation and warped-product
//! conditions point by point over a deterministic sample plan.
//!
//! Module map:
//!
//! - [`scalarfield`]: expression parser and second-order forward AD.
//! - [`ambient`]: the flat space `(R^2m, P, G)` and its structure checks.
//! - [`submanifold`]: frames, Gauss and Weingarten formulas, connection, brackets.
//! - [`parastructure`]: `t`, `n`, `t'`, `n'`, slant coefficients, the 2-form.
//! - [`distributions`]: decompositions, projections, integrability and foliation conditions.
//! - [`warped`]: warped-metric detection and the warped-product theorems.
//! - [`scene`], [`analysis`], [`report`]: scene files, the pipeline and its reports.
//! - [`cli`]: the `parageo` command line.

pub mod ambient;
pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod distributions;
pub mod linalg;
pub mod parastructure;
pub mod report;
pub mod scalarfield;
pub mod scene;
pub mod submanifold;
pub mod tolerances;
pub mod warped;

pub use ambient::AmbientSpace;
pub use distributions::Distribution;
pub use report::{AnalysisReport, Verdict};
pub use scalarfield::{eval_jet2, parse, Expr, Jet2};
pub use scene::Scene;
pub use submanifold::{Immersion, PointFrame, VectorField};
