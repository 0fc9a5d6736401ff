//! The `parageo` command line.
//!
//! Exit codes: 0 when no check fails, 1 when some check fails, 2 for usage
//! and scene errors, 3 when numerical guards stopped part of the analysis.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{self, Command};
use crate::corpus;
use crate::report::AnalysisReport;
use crate::scene::Scene;

#[derive(Debug, Parser)]
#[command(name = "parageo", version, about = "Tensor calculus checks on submanifolds of flat para-Kaehler spaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check P^2 = I, P^T G P = -G and the signature of G.
    VerifyAmbient(SceneArgs),
    /// Run the full pipeline on a scene.
    Analyze(SceneArgs),
    /// Classify one distribution of a scene.
    CheckSlant {
        #[command(flatten)]
        scene: SceneArgs,
        /// Distribution name.
        distribution: String,
    },
    /// Test one warped-product declaration of a scene.
    CheckWarped {
        #[command(flatten)]
        scene: SceneArgs,
        /// Warped declaration name.
        name: String,
    },
    /// Analyze the built-in cone scene.
    ReproduceExample(Flags),
    /// Print a built-in scene file.
    ShowScene {
        /// One of cone, product, invariant-plane, anti-invariant-graph, forbidden-orientation.
        name: String,
    },
}

#[derive(Debug, Args)]
struct SceneArgs {
    /// Scene file, or `builtin:<name>` for a built-in scene.
    scene: String,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Args)]
struct Flags {
    /// Write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Identity and classification tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed of the random sample points.
    #[arg(long)]
    seed: Option<u64>,
    /// Grid resolution per parameter.
    #[arg(long)]
    grid: Option<usize>,
    /// Print the JSON report instead of text.
    #[arg(long)]
    json: bool,
}

fn load_scene(spec: &str) -> Result<Scene, String> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return corpus::named(name).ok_or_else(|| {
            format!("no built-in scene {name:?}; known: {}", corpus::NAMES.join(", "))
        });
    }
    Scene::load(std::path::Path::new(spec)).map_err(|e| e.to_string())
}

fn apply(scene: &mut Scene, f: &Flags) {
    if let Some(t) = f.tol {
        scene.tolerances.identity = t;
        scene.tolerances.classification = t;
    }
    let mut plan = scene.immersion.samples();
    if let Some(s) = f.seed {
        plan.seed = s;
    }
    if let Some(g) = f.grid {
        plan.grid = g;
    }
    scene.immersion.set_samples(plan);
}

fn emit(report: &AnalysisReport, f: &Flags, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let json = report.to_json();
    if let Some(path) = &f.out {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            let _ = writeln!(err, "parageo: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    let body = if f.json { format!("{json}\n") } else { report.to_text() };
    let _ = out.write_all(body.as_bytes());
    if !report.errors.is_empty() {
        for e in &report.errors {
            let _ = writeln!(err, "parageo: numerical guard: {e}");
        }
        3
    } else if report.has_failures() {
        1
    } else {
        0
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let (spec, flags, command) = match cli.command {
        Cmd::VerifyAmbient(a) => (a.scene, a.flags, Command::VerifyAmbient),
        Cmd::Analyze(a) => (a.scene, a.flags, Command::Analyze),
        Cmd::CheckSlant { scene, distribution } => (scene.scene, scene.flags, Command::CheckSlant(distribution)),
        Cmd::CheckWarped { scene, name } => (scene.scene, scene.flags, Command::CheckWarped(name)),
        Cmd::ReproduceExample(f) => ("builtin:cone".to_string(), f, Command::Analyze),
        Cmd::ShowScene { name } => {
            let src = match name.as_str() {
                "cone" => corpus::CONE,
                "product" => corpus::PRODUCT,
                "invariant-plane" => corpus::INVARIANT_PLANE,
                "anti-invariant-graph" => corpus::ANTI_INVARIANT,
                "forbidden-orientation" => corpus::FORBIDDEN,
                _ => {
                    let _ = writeln!(err, "parageo: no built-in scene {name:?}; known: {}", corpus::NAMES.join(", "));
                    return 2;
                }
            };
            let _ = out.write_all(src.as_bytes());
            return 0;
        }
    };
    let mut scene = match load_scene(&spec) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "parageo: {e}");
            return 2;
        }
    };
    apply(&mut scene, &flags);
    match analysis::run(&scene, &command) {
        Ok(r) => emit(&r, &flags, out, err),
        Err(e) => {
            let _ = writeln!(err, "parageo: {e}");
            2
        }
    }
}
