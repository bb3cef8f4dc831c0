use anyhow::{Context, Result};
use causet_experiments::{run, ExperimentConfig, ExperimentResult};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "causet", version, about = "Seeded experiments on sprinkled causal sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order-class distribution of K sprinkled points
    Ck(Common),
    /// Base cylinder against a needle: close class distributions, far apart geometry
    Thm2(Common),
    /// Chain probability on cylinders of growing height
    Thm3(Common),
    /// Cone-metric distortion of order-matched nets
    Thm4(Common),
    /// Diamond counts against exact volumes
    VolumeLaw(Common),
    /// Interval-count volume estimates on growing prefixes
    Reconstruct(Common),
    /// Time-separation distance bounds between two models
    Gh(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Overrides the master seed of the config
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: config `out`, else results/<experiment>)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match cli.command {
        Command::Ck(a) => ("ck", a),
        Command::Thm2(a) => ("thm2", a),
        Command::Thm3(a) => ("thm3", a),
        Command::Thm4(a) => ("thm4", a),
        Command::VolumeLaw(a) => ("volume-law", a),
        Command::Reconstruct(a) => ("reconstruct", a),
        Command::Gh(a) => ("gh", a),
    };
    match execute(name, &args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(name: &str, args: &Common) -> Result<bool> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let out = match (&args.out, &config.out) {
        (Some(dir), _) => dir.clone(),
        (None, Some(dir)) => PathBuf::from(dir),
        (None, None) => Path::new("results").join(name),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = args.workers {
        pool = pool.num_threads(w.max(1));
    }
    let pool = pool.build().context("cannot start the worker pool")?;
    let workers = pool.current_num_threads();

    let start = Instant::now();
    let result = pool.install(|| run(name, &config))?;
    let seconds = start.elapsed().as_secs_f64();

    write_outputs(&out, &result, seconds, workers)?;
    for c in &result.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    println!("{name}: {} ({seconds:.1} s, results in {})", if result.passed { "passed" } else { "FAILED" }, out.display());
    Ok(result.passed)
}

fn write_outputs(dir: &Path, result: &ExperimentResult, seconds: f64, workers: usize) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let write = |file: &str, contents: &str| {
        let path = dir.join(file);
        std::fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))
    };
    write("result.json", &result.to_json())?;
    for a in &result.artifacts {
        write(&a.name, &a.contents)?;
    }
    let timing = serde_json::json!({
        "experiment": result.experiment,
        "wall_clock_seconds": seconds,
        "workers": workers,
    });
    write("timing.json", &(serde_json::to_string_pretty(&timing)? + "\n"))
}
