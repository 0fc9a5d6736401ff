//! Built-in scenes and seeded generators of further ones.
//!
//! The randomized builders compose a known scene with a random isometry of
//! the ambient that commutes with `P`: the same orthogonal matrix acting on
//! both halves of `R^2m`. Slant coefficients, warping functions and every
//! identity are preserved, while the coordinate expressions become dense.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scene::Scene;

pub const CONE: &str = include_str!("../scenes/cone.toml");
pub const PRODUCT: &str = include_str!("../scenes/product.toml");
pub const INVARIANT_PLANE: &str = include_str!("../scenes/invariant_plane.toml");
pub const ANTI_INVARIANT: &str = include_str!("../scenes/anti_invariant.toml");
pub const FORBIDDEN: &str = include_str!("../scenes/forbidden.toml");

/// Names accepted by [`named`].
pub const NAMES: [&str; 5] = [
    "cone",
    "product",
    "invariant-plane",
    "anti-invariant-graph",
    "forbidden-orientation",
];

fn load(src: &str) -> Scene {
    Scene::from_toml(src).expect("built-in scene parses")
}

pub fn cone() -> Scene {
    load(CONE)
}

pub fn product() -> Scene {
    load(PRODUCT)
}

pub fn invariant_plane() -> Scene {
    load(INVARIANT_PLANE)
}

pub fn anti_invariant_graph() -> Scene {
    load(ANTI_INVARIANT)
}

/// The forbidden-orientation scene with the declared warping function `f`.
pub fn forbidden_orientation(f: &str) -> Scene {
    load(&FORBIDDEN.replace("f = \"exp(x2)\"", &format!("f = {f:?}")))
}

pub fn named(name: &str) -> Option<Scene> {
    Some(match name {
        "cone" => cone(),
        "product" => product(),
        "invariant-plane" => invariant_plane(),
        "anti-invariant-graph" => anti_invariant_graph(),
        "forbidden-orientation" => load(FORBIDDEN),
        _ => return None,
    })
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    a.qr().q()
}

/// `sum_j r[i][j] * (terms[j])` as source text.
fn combine(r: &DMatrix<f64>, i: usize, terms: &[String]) -> String {
    let mut s = String::new();
    for (j, t) in terms.iter().enumerate() {
        let c = r[(i, j)];
        if s.is_empty() {
            s = format!("{c:?}*({t})");
        } else if c < 0.0 {
            s += &format!(" - {:?}*({t})", -c);
        } else {
            s += &format!(" + {c:?}*({t})");
        }
    }
    s
}

/// Coordinates `(R u, R v)` for the halves `u`, `v` of `R^2m`.
fn rotate(rng: &mut ChaCha8Rng, u: &[String], v: &[String]) -> Vec<String> {
    let r = random_orthogonal(rng, u.len());
    (0..u.len())
        .map(|i| combine(&r, i, u))
        .chain((0..v.len()).map(|i| combine(&r, i, v)))
        .collect()
}

fn quoted(v: &[String]) -> String {
    let q: Vec<String> = v.iter().map(|s| format!("{s:?}")).collect();
    format!("[{}]", q.join(", "))
}

/// A product of an anti-invariant curve and a flat slant plane in `R^8`
/// with slant coefficient `1 / (1 + alpha^2)`, moved by a random isometry.
/// Returns the scene and its slant coefficient.
pub fn random_product(seed: u64) -> (Scene, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha: f64 = rng.random_range(0.5..2.0);
    let c2: f64 = rng.random_range(0.2..1.0);
    let c3: f64 = rng.random_range(-0.3..0.3);
    let u = [
        "x2".to_string(),
        format!("{c2:?}*x2^2 + {c3:?}*x2^3"),
        "x1".to_string(),
        format!("{alpha:?}*x1"),
    ];
    let v = ["0".to_string(), "0".to_string(), "x3".to_string(), "0".to_string()];
    let coords = rotate(&mut rng, &u, &v);
    let src = format!(
        r#"name = "random-product-{seed}"
[ambient]
m = 4
[immersion]
coords = {}
lo = [-1.0, -0.8, -1.0]
hi = [1.0, 0.8, 1.0]
[samples]
grid = 3
random = 8
seed = {seed}
[[distribution]]
name = "Dbot"
generators = [["0", "1", "0"]]
[[distribution]]
name = "Dlam"
generators = [["1", "0", "0"], ["0", "0", "1"]]
[decomposition]
anti_invariant = "Dbot"
slant = "Dlam"
[[warped]]
name = "product"
base = [1, 3]
fiber = [2]
f = "1"
orientation = "slant-base"
"#,
        quoted(&coords)
    );
    (load(&src), 1.0 / (1.0 + alpha * alpha))
}

/// The cone with random constants `k1`, `k2` and a random scale of the
/// radial slot, moved by a random isometry. The slant coefficient is
/// `a^2 / (1 + a^2)` for the scale `a`, and the warping function is `x1`.
pub fn random_cone(seed: u64) -> (Scene, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: f64 = rng.random_range(0.5..2.0);
    let k1: f64 = rng.random_range(-2.0..2.0);
    let k2: f64 = rng.random_range(-2.0..2.0);
    let u = [
        format!("{a:?}*x1"),
        "x1*cos(x2)".to_string(),
        "x1*sin(x2)".to_string(),
    ];
    let v = ["x3".to_string(), format!("{k1:?}"), format!("{k2:?}")];
    let coords = rotate(&mut rng, &u, &v);
    let src = format!(
        r#"name = "random-cone-{seed}"
[ambient]
m = 3
[immersion]
coords = {}
lo = [0.5, 0.1, 0.5]
hi = [2.0, 1.4, 2.0]
[samples]
grid = 3
random = 8
seed = {seed}
[[distribution]]
name = "Dbot"
generators = [["0", "1", "0"]]
[[distribution]]
name = "Dlam"
generators = [["1", "0", "0"], ["0", "0", "1"]]
[decomposition]
anti_invariant = "Dbot"
slant = "Dlam"
[[warped]]
name = "radial"
base = [1, 3]
fiber = [2]
f = "x1"
orientation = "slant-base"
"#,
        quoted(&coords)
    );
    (load(&src), a * a / (1.0 + a * a))
}
