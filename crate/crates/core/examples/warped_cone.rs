//! The cone as a warped product with slant base: detection of the warping
//! function and the connection and characterization checks.

use parageo::corpus;
use parageo::parse;
use parageo::warped::{characterization_test, detect_warped, triviality_test, verify_warped_connection};

fn main() {
    let scene = corpus::cone();
    let frames = scene.immersion.sample().frames;
    let tol = &scene.tolerances;
    let x1 = parse("x1", 3).unwrap();
    let split = detect_warped(&scene.immersion, &frames, &[0, 2], &[1], Some(&x1), tol).unwrap();
    println!(
        "base {:?}, fiber {:?}: f / x1 = {:?} (spread {:.1e})",
        split.base_vars, split.fiber_vars, split.candidate_ratio, split.candidate_spread.unwrap_or(f64::NAN)
    );
    let c = verify_warped_connection(&frames, &split, tol);
    println!(
        "base closed {:.1e}, mixed {:.1e}, umbilical {:.1e}, H = -grad ln f {:.1e}",
        c.base_closed, c.mixed, c.umbilicity, c.mean_curvature
    );
    let (dbot, dlam) = scene.decomposition_pair().unwrap();
    let ch = characterization_test(&frames, dbot, dlam, 0.5, &split, tol).unwrap();
    println!("characterization residuals {:.1e} {:.1e}", ch.scalar_residual, ch.vector_residual);
    let t = triviality_test(&frames, dbot, dlam, 0.5, &split, tol).unwrap();
    println!(
        "trivial {}; lambda (Z ln f) g(X,Y) = {} <h(X,Y), ntZ> up to <h(X,tZ), PY>",
        t.trivial, t.sign.measured_sign
    );
}
