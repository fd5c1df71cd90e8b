mod config;
mod presets;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use focklat_core::builders::LatticeFn;
use focklat_core::lattice::ComplexLattice;

use config::{Format, RunConfig};
use suites::{Bundle, Ctx, Suite};

#[derive(Parser)]
#[command(name = "focklat", version, about = "Lattice-adapted sigma and tau functions: build, verify, reproduce")]
struct Cli {
    /// TOML run configuration; flags given here override it
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Largest radius for checks and profiles (overrides max_radius)
    #[arg(long, global = true, value_name = "R")]
    radius: Option<f64>,
    #[arg(long, global = true, value_name = "S")]
    grid_step: Option<f64>,
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a function and its lattice and write them as JSON
    Build {
        /// Preset name or path to a JSON build spec
        #[arg(value_name = "PRESET_OR_FILE", required_unless_present = "preset", conflicts_with = "preset")]
        target: Option<String>,
        #[arg(long, value_name = "NAME")]
        preset: Option<String>,
    },
    /// Run one verification suite and write its report
    Verify {
        #[arg(long, value_name = "FILE", requires = "lattice", conflicts_with = "preset")]
        function: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        lattice: Option<PathBuf>,
        /// Build in memory instead of reading files
        #[arg(long, value_name = "NAME", required_unless_present = "function")]
        preset: Option<String>,
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Regenerate a bundle of checks with a summary table
    Repro {
        #[arg(value_enum)]
        bundle: Bundle,
    },
}

/// Exit code 2: the run could not start or its inputs were unusable.
struct Usage(String);

fn setup_threads() -> Result<(), Usage> {
    let Ok(raw) = std::env::var("FOCKLAT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| Usage(format!("FOCKLAT_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Usage(format!("cannot start thread pool: {e}")))
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, Usage> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(Usage)?,
        None => RunConfig::default(),
    };
    if let Some(r) = cli.radius {
        cfg.max_radius = r;
    }
    if let Some(s) = cli.grid_step {
        cfg.grid_step = s;
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    cfg.validate().map_err(Usage)?;
    Ok(cfg)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Usage(format!("malformed {what} JSON in {}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    let s = path.file_stem().and_then(|s| s.to_str()).unwrap_or("input");
    s.strip_suffix(".function").unwrap_or(s).to_string()
}

fn run(cli: Cli) -> Result<bool, Usage> {
    setup_threads()?;
    let cfg = resolve_config(&cli)?;
    let ctx = Ctx::new(cfg).map_err(Usage)?;
    match cli.cmd {
        Command::Build { target, preset } => {
            let spec = target.or(preset).expect("clap enforces one of the two");
            let b = presets::build(&spec).map_err(Usage)?;
            let mut files = vec![
                ctx.write_json(&format!("{}.lattice", b.name), &b.lattice).map_err(Usage)?,
                ctx.write_json(&format!("{}.function", b.name), &b.function).map_err(Usage)?,
            ];
            if let Some(adj) = &b.adjoint {
                files.push(ctx.write_json(&format!("{}.adjoint", b.name), adj).map_err(Usage)?);
            }
            println!("{}: d = {}, {} factors", b.name, b.function.dim, b.function.factors.len());
            for f in files {
                println!("wrote {}", f.display());
            }
            Ok(true)
        }
        Command::Verify { function, lattice, preset, suite } => {
            let (name, f, lat) = match (function, lattice, preset) {
                (Some(fp), Some(lp), None) => {
                    let f: LatticeFn = read_json(&fp, "function")?;
                    f.validate().map_err(|e| Usage(format!("invalid function in {}: {e}", fp.display())))?;
                    let lat: ComplexLattice = read_json(&lp, "lattice")?;
                    (stem(&fp), f, lat)
                }
                (None, None, Some(p)) => {
                    let b = presets::build(&p).map_err(Usage)?;
                    // the known interpolant is checked against the lattice it interpolates on
                    let lat = match (suite, b.adjoint) {
                        (Suite::Vanish | Suite::Interp, Some(adj)) => adj,
                        _ => b.lattice,
                    };
                    (b.name, b.function, lat)
                }
                _ => return Err(Usage("verify needs either --function with --lattice, or --preset".into())),
            };
            let out = suites::verify(&ctx, &f, &lat, &name, suite).map_err(Usage)?;
            report(&out);
            Ok(out.pass)
        }
        Command::Repro { bundle } => {
            let out = suites::repro(&ctx, bundle).map_err(Usage)?;
            report(&out);
            Ok(out.pass)
        }
    }
}

fn report(out: &suites::Outcome) {
    print!("{}", out.message);
    if !out.message.ends_with('\n') {
        println!();
    }
    for f in &out.files {
        println!("wrote {}", f.display());
    }
    println!("{}", if out.pass { "PASS" } else { "FAIL" });
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
