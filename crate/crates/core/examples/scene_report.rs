//! Full pipeline on a scene file, or on a built-in scene by name.
//!
//! cargo run --example scene_report -- crates/core/scenes/product.toml

use parageo::analysis::{self, Command};
use parageo::{corpus, Scene};

fn main() {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "invariant-plane".to_string());
    let scene = match corpus::named(&arg) {
        Some(s) => s,
        None => Scene::load(std::path::Path::new(&arg)).unwrap_or_else(|e| {
            eprintln!("{e}");
            std::process::exit(2)
        }),
    };
    let report = analysis::run(&scene, &Command::Analyze).unwrap();
    print!("{}", report.to_text());
}
