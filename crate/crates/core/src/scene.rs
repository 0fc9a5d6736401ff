//! TOML scene files.
//!
//! ```toml
//! name = "cone"
//!
//! [ambient]
//! m = 3                       # canonical (R^6, P, G); or explicit `p` and `g`
//!
//! [immersion]
//! coords = ["x1", "x1*cos(x2)", "x1*sin(x2)", "x3", "1.5", "-0.5"]
//! lo = [0.5, 0.1, 0.5]
//! hi = [2.0, 1.4, 2.0]
//! exclude = [{ var = 3, value = 0.0 }]
//!
//! [samples]                   # optional
//! grid = 5
//! random = 20
//! seed = 0
//!
//! [tolerances]                # optional
//! identity = 1e-8
//!
//! [[distribution]]
//! name = "Dbot"
//! generators = [["0", "1", "0"]]
//!
//! [decomposition]
//! anti_invariant = "Dbot"
//! slant = "Dlam"
//!
//! [[warped]]
//! name = "radial"
//! base = [1, 3]
//! fiber = [2]
//! f = "x1"                    # optional candidate
//! orientation = "slant-base"  # optional, enables the product theorems
//!
//! [expected]
//! metric = [["2", "0", "0"], ["0", "x1^2", "0"], ["0", "0", "-1"]]
//!
//! [[stated]]
//! quantity = "lambda"
//! target = "Dlam"
//! text = "1/sqrt(2)"
//! ```
//!
//! Variable indices in the file are one-based, as in `x1`. Unknown keys are
//! rejected.

use std::path::Path;

use nalgebra::DMatrix;
use serde::Deserialize;
use thiserror::Error;

use crate::ambient::AmbientSpace;
use crate::distributions::Distribution;
use crate::scalarfield::{eval_jet2, parse, Expr};
use crate::submanifold::{Domain, Hyperplane, Immersion, SamplePlan, VectorField};
use crate::tolerances::Tolerances;
use crate::warped::Orientation;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("scene syntax: {0}")]
    Syntax(String),
    #[error("in {field}: {message}")]
    Expression { field: String, message: String },
    #[error("invalid scene: {0}")]
    Invalid(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    name: String,
    #[serde(default)]
    description: String,
    ambient: AmbientFile,
    immersion: ImmersionFile,
    #[serde(default)]
    samples: SamplePlan,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default, rename = "distribution")]
    distributions: Vec<DistributionFile>,
    decomposition: Option<DecompositionDecl>,
    #[serde(default)]
    warped: Vec<WarpedFile>,
    expected: Option<ExpectedFile>,
    #[serde(default)]
    stated: Vec<StatedFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AmbientFile {
    m: Option<usize>,
    p: Option<Vec<Vec<f64>>>,
    g: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImmersionFile {
    coords: Vec<String>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    #[serde(default)]
    exclude: Vec<Hyperplane>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionFile {
    name: String,
    generators: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionDecl {
    pub anti_invariant: String,
    pub slant: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WarpedFile {
    name: String,
    base: Vec<usize>,
    fiber: Vec<usize>,
    f: Option<String>,
    orientation: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpectedFile {
    metric: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StatedFile {
    quantity: String,
    target: String,
    text: String,
}

/// A warped-product declaration with zero-based indices.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpedDecl {
    pub name: String,
    pub base: Vec<usize>,
    pub fiber: Vec<usize>,
    pub f: Option<Expr>,
    pub orientation: Option<Orientation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatedQuantity {
    /// Slant coefficient of the target distribution.
    Lambda,
}

/// A value given in the source of a scene, compared against computation.
#[derive(Debug, Clone, PartialEq)]
pub struct Stated {
    pub quantity: StatedQuantity,
    pub target: String,
    pub text: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedMetric {
    pub sources: Vec<Vec<String>>,
    pub entries: Vec<Vec<Expr>>,
}

impl ExpectedMetric {
    pub fn eval(&self, p: &[f64]) -> Result<DMatrix<f64>, crate::scalarfield::DomainError> {
        let d = self.entries.len();
        let mut g = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                g[(i, j)] = eval_jet2(&self.entries[i][j], p)?.value;
            }
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub name: String,
    pub description: String,
    pub immersion: Immersion,
    pub tolerances: Tolerances,
    pub distributions: Vec<Distribution>,
    pub decomposition: Option<DecompositionDecl>,
    pub warped: Vec<WarpedDecl>,
    pub expected_metric: Option<ExpectedMetric>,
    pub stated: Vec<Stated>,
}

fn expr(src: &str, d: usize, field: impl FnOnce() -> String) -> Result<Expr, SceneError> {
    parse(src, d).map_err(|e| SceneError::Expression {
        field: field(),
        message: format!("{e} in {src:?}"),
    })
}

fn matrix(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>, SceneError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(SceneError::Invalid(format!("ambient {what} is not square")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn one_based(v: &[usize], d: usize, what: &str) -> Result<Vec<usize>, SceneError> {
    v.iter()
        .map(|&i| {
            if i == 0 || i > d {
                Err(SceneError::Invalid(format!("{what}: variable index {i} not in 1..={d}")))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

impl Scene {
    pub fn load(path: &Path) -> Result<Scene, SceneError> {
        let src = std::fs::read_to_string(path).map_err(|e| SceneError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Scene::from_toml(&src)
    }

    pub fn from_toml(src: &str) -> Result<Scene, SceneError> {
        let file: SceneFile = toml::from_str(src).map_err(|e| SceneError::Syntax(e.to_string()))?;
        let ambient = match (file.ambient.m, &file.ambient.p, &file.ambient.g) {
            (Some(0), None, None) => {
                return Err(SceneError::Invalid("ambient m must be at least 1".into()))
            }
            (Some(m), None, None) => AmbientSpace::canonical(m),
            (None, Some(p), Some(g)) => AmbientSpace::from_matrices(matrix(p, "p")?, matrix(g, "g")?)
                .map_err(|e| SceneError::Invalid(e.to_string()))?,
            _ => {
                return Err(SceneError::Invalid(
                    "ambient needs either `m` or both `p` and `g`".into(),
                ))
            }
        };

        let im = file.immersion;
        let d = im.lo.len();
        if d == 0 || im.hi.len() != d {
            return Err(SceneError::Invalid(format!(
                "immersion lo has {} entries, hi has {}",
                d,
                im.hi.len()
            )));
        }
        if let Some(i) = (0..d).find(|&i| !(im.lo[i] < im.hi[i])) {
            return Err(SceneError::Invalid(format!("empty parameter range for x{}", i + 1)));
        }
        let coords = im
            .coords
            .iter()
            .enumerate()
            .map(|(a, s)| expr(s, d, || format!("immersion.coords[{a}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let mut domain = Domain::new(im.lo, im.hi);
        for h in &im.exclude {
            let var = one_based(&[h.var], d, "immersion.exclude")?[0];
            domain.excluded.push(Hyperplane { var, value: h.value });
        }
        let immersion = Immersion::new(ambient, coords, domain, file.samples)
            .map_err(|e| SceneError::Invalid(e.to_string()))?;

        let mut distributions: Vec<Distribution> = Vec::new();
        for df in &file.distributions {
            if distributions.iter().any(|x| x.name() == df.name) {
                return Err(SceneError::Invalid(format!("distribution {} defined twice", df.name)));
            }
            let mut gens = Vec::new();
            for (k, g) in df.generators.iter().enumerate() {
                if g.len() != d {
                    return Err(SceneError::Invalid(format!(
                        "distribution {} generator {} has {} components, d = {d}",
                        df.name,
                        k + 1,
                        g.len()
                    )));
                }
                let coeffs = g
                    .iter()
                    .enumerate()
                    .map(|(j, s)| {
                        expr(s, d, || format!("distribution {} generator {} component {}", df.name, k + 1, j + 1))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                gens.push(VectorField::new(coeffs));
            }
            distributions.push(Distribution::new(df.name.clone(), gens));
        }
        let known = |n: &str| distributions.iter().any(|x| x.name() == n);
        if let Some(dd) = &file.decomposition {
            for n in [&dd.anti_invariant, &dd.slant] {
                if !known(n) {
                    return Err(SceneError::Invalid(format!("decomposition names unknown distribution {n}")));
                }
            }
        }

        let mut warped = Vec::new();
        for w in &file.warped {
            if warped.iter().any(|x: &WarpedDecl| x.name == w.name) {
                return Err(SceneError::Invalid(format!("warped declaration {} defined twice", w.name)));
            }
            let orientation = match w.orientation.as_deref() {
                None => None,
                Some("slant-base") => Some(Orientation::SlantBase),
                Some("anti-invariant-base") => Some(Orientation::AntiInvariantBase),
                Some(o) => {
                    return Err(SceneError::Invalid(format!(
                        "warped {}: orientation {o:?} is neither slant-base nor anti-invariant-base",
                        w.name
                    )))
                }
            };
            if orientation.is_some() && file.decomposition.is_none() {
                return Err(SceneError::Invalid(format!(
                    "warped {} has an orientation but the scene has no [decomposition]",
                    w.name
                )));
            }
            let f = match &w.f {
                Some(s) => Some(expr(s, d, || format!("warped {} f", w.name))?),
                None => None,
            };
            warped.push(WarpedDecl {
                name: w.name.clone(),
                base: one_based(&w.base, d, &format!("warped {} base", w.name))?,
                fiber: one_based(&w.fiber, d, &format!("warped {} fiber", w.name))?,
                f,
                orientation,
            });
        }

        let expected_metric = match file.expected.and_then(|e| e.metric) {
            None => None,
            Some(rows) => {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(SceneError::Invalid(format!("expected metric must be {d}x{d}")));
                }
                let entries = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        r.iter()
                            .enumerate()
                            .map(|(j, s)| expr(s, d, || format!("expected.metric[{i}][{j}]")))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some(ExpectedMetric { sources: rows, entries })
            }
        };

        let mut stated = Vec::new();
        for s in &file.stated {
            let quantity = match s.quantity.as_str() {
                "lambda" => StatedQuantity::Lambda,
                q => return Err(SceneError::Invalid(format!("unknown stated quantity {q:?}"))),
            };
            if !known(&s.target) {
                return Err(SceneError::Invalid(format!("stated value names unknown distribution {}", s.target)));
            }
            let e = expr(&s.text, d, || format!("stated {}", s.quantity))?;
            if e.max_var().is_some() {
                return Err(SceneError::Invalid(format!("stated value {:?} is not a constant", s.text)));
            }
            let value = eval_jet2(&e, &vec![0.0; d])
                .map_err(|err| SceneError::Invalid(format!("stated value {:?}: {err}", s.text)))?
                .value;
            stated.push(Stated {
                quantity,
                target: s.target.clone(),
                text: s.text.clone(),
                value,
            });
        }

        Ok(Scene {
            name: file.name,
            description: file.description,
            immersion,
            tolerances: file.tolerances,
            distributions,
            decomposition: file.decomposition,
            warped,
            expected_metric,
            stated,
        })
    }

    pub fn dim(&self) -> usize {
        self.immersion.dim()
    }

    pub fn distribution(&self, name: &str) -> Option<&Distribution> {
        self.distributions.iter().find(|d| d.name() == name)
    }

    pub fn warped_decl(&self, name: &str) -> Option<&WarpedDecl> {
        self.warped.iter().find(|w| w.name == name)
    }

    /// The anti-invariant and slant distributions of the declared decomposition.
    pub fn decomposition_pair(&self) -> Option<(&Distribution, &Distribution)> {
        let dd = self.decomposition.as_ref()?;
        Some((self.distribution(&dd.anti_invariant)?, self.distribution(&dd.slant)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "plane"
[ambient]
m = 1
[immersion]
coords = ["x1", "x2"]
lo = [0, 0]
hi = [1, 1]
"#;

    #[test]
    fn minimal_scene_uses_defaults() {
        let s = Scene::from_toml(MINIMAL).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.immersion.samples(), SamplePlan::default());
        assert_eq!(s.tolerances, Tolerances::default());
        assert!(s.decomposition.is_none());
    }

    #[test]
    fn unknown_keys_and_bad_expressions_are_rejected() {
        let bad = MINIMAL.replace("m = 1", "m = 1\nq = 2");
        assert!(matches!(Scene::from_toml(&bad), Err(SceneError::Syntax(_))));
        let bad = MINIMAL.replace("\"x2\"]", "\"x1 + + x2\"]");
        let err = Scene::from_toml(&bad).unwrap_err();
        assert!(matches!(err, SceneError::Expression { .. }), "{err}");
        assert!(err.to_string().contains("coords[1]"));
        let bad = MINIMAL.replace("\"x2\"]", "\"x3\"]");
        assert!(matches!(Scene::from_toml(&bad), Err(SceneError::Expression { .. })));
    }

    #[test]
    fn references_must_resolve() {
        let bad = format!("{MINIMAL}\n[decomposition]\nanti_invariant = \"A\"\nslant = \"B\"\n");
        assert!(matches!(Scene::from_toml(&bad), Err(SceneError::Invalid(_))));
    }

    #[test]
    fn stated_values_are_constant_expressions() {
        let src = format!(
            "{MINIMAL}\n[[distribution]]\nname = \"D\"\ngenerators = [[\"1\", \"0\"]]\n\
             [[stated]]\nquantity = \"lambda\"\ntarget = \"D\"\ntext = \"1/sqrt(2)\"\n"
        );
        let s = Scene::from_toml(&src).unwrap();
        assert!((s.stated[0].value - 0.5f64.sqrt()).abs() < 1e-15);
    }
}
