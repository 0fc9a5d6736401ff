//! Slant classification of the distributions declared on the cone.

use parageo::corpus;
use parageo::parastructure::{slant_analyze, verify_t_identities};

fn main() {
    let scene = corpus::cone();
    let frames = scene.immersion.sample().frames;
    for dist in &scene.distributions {
        let r = slant_analyze(&frames, dist, scene.tolerances.classification).unwrap();
        println!(
            "{}: {:?}, lambda {:.12}, spread {:.1e}, angle {:?}",
            dist.name(),
            r.classification,
            r.lambda,
            r.spread,
            r.angle_degrees
        );
        let t = verify_t_identities(&frames, dist, r.lambda, scene.tolerances.identity).unwrap();
        println!(
            "   g(tX,tY) = {} lambda g(X,Y), <nX,nY> = {} (1 - lambda) g(X,Y)",
            t.metric_t.measured_sign, t.metric_n.measured_sign
        );
    }
}
