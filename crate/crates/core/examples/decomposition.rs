//! Decomposition into anti-invariant and slant pieces, then the
//! integrability and foliation conditions against their bracket and
//! connection oracles.

use parageo::corpus;
use parageo::distributions::{check_decomposition, condition_report, integrability_test, Condition};

fn main() {
    let (scene, lambda) = corpus::random_product(7);
    let frames = scene.immersion.sample().frames;
    let (dbot, dlam) = scene.decomposition_pair().unwrap();
    let (d, _, _) = check_decomposition(&frames, dbot, dlam, &scene.tolerances).unwrap();
    println!("{:?} (built with lambda {lambda:.6})", d.verdict);
    for dist in [dbot, dlam] {
        let i = integrability_test(&frames, dist, &scene.tolerances).unwrap();
        println!("{} integrable: {:?} ({:.1e})", dist.name(), i.status, i.out_of_span);
    }
    for c in Condition::ALL {
        let r = condition_report(&frames, dbot, dlam, d.lambda, c, &scene.tolerances).unwrap();
        println!(
            "{:<28} condition {:?}, oracle {:?}, agree {:?}",
            c.label(),
            r.condition_status,
            r.oracle_status,
            r.agree
        );
    }
}
