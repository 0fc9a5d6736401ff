//! An anti-invariant base with a proper slant fiber forces the warping to be
//! constant. Try a few declared warping functions on the same immersion.

use parageo::analysis::{self, Command};
use parageo::corpus;

fn main() {
    for f in ["exp(x2)", "1 + x2^2", "1", "3"] {
        let scene = corpus::forbidden_orientation(f);
        let r = analysis::run(&scene, &Command::CheckWarped("anti-invariant-base".into())).unwrap();
        let o = r.warped[0].obstruction.as_ref().unwrap();
        println!(
            "f = {f:<9} {:?}: max |2 lambda X(ln f) g(Z,Z)| = {:.3e}",
            o.verdict, o.equation_residual
        );
    }
}
