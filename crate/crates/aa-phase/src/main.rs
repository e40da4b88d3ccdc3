//! Thin command-line front end. All computation lives in the library; this
//! binary parses arguments, applies overrides, writes output files, and maps
//! error classes to exit codes:
//!
//! 0 success, 1 invariant failure (`verify`), 2 configuration error,
//! 3 numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use aa_phase::config::{ConfigError, RunConfig, ValidatedRun};
use aa_phase::sweep::{run_single, run_sweep, write_csv, write_json};
use aa_phase::verify::{run_verify, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "aa-phase",
    version,
    about = "Geometric phases of anharmonic Bose Hamiltonians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config's `out` key (default "out").
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the quadrature step count.
    #[arg(long)]
    steps: Option<usize>,
    /// Override the truncation tail tolerance.
    #[arg(long = "tail-tol")]
    tail_tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// One parameter point; writes <out>/report.json.
    Single(RunArgs),
    /// A parameter sweep; writes <out>/sweep.csv and <out>/summary.json.
    Sweep(RunArgs),
    /// Randomized invariant suite; prints a deterministic report.
    Verify {
        /// Optional configuration supplying a default seed.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 2048)]
        steps: usize,
        /// Also write the report to <out>/verify.txt.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sensitivity fixture: corrupt the closed form and expect failure.
        #[arg(long, hide = true)]
        corrupt_closed_form: bool,
    },
}

const EXIT_INVARIANT: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => code,
        Err(Failure::Config(e)) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Numerical { error, config }) => {
            let diagnostic = serde_json::json!({
                "kind": "numerical_failure",
                "error": error.to_string(),
                "config": config,
            });
            eprintln!("{}", serde_json::to_string_pretty(&diagnostic).unwrap());
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}

enum Failure {
    Config(ConfigError),
    Numerical {
        error: aa_phase::Error,
        config: Option<Box<RunConfig>>,
    },
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

fn load_run(args: &RunArgs) -> Result<(ValidatedRun, PathBuf), ConfigError> {
    let mut config = RunConfig::load(&args.config)?;
    if let Some(steps) = args.steps {
        config.quadrature_steps = steps;
    }
    if let Some(tail_tol) = args.tail_tol {
        config.tail_tol = tail_tol;
    }
    let out_dir = args
        .out
        .clone()
        .or_else(|| config.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    Ok((config.validate()?, out_dir))
}

fn prepare_out_dir(dir: &Path) -> Result<(), ConfigError> {
    std::fs::create_dir_all(dir).map_err(|e| {
        ConfigError(format!(
            "cannot create output directory {}: {e}",
            dir.display()
        ))
    })
}

fn numerical(error: aa_phase::Error, config: &RunConfig) -> Failure {
    Failure::Numerical {
        error,
        config: Some(Box::new(config.clone())),
    }
}

fn dispatch() -> Result<ExitCode, Failure> {
    match Cli::parse().command {
        Command::Single(args) => {
            let (run, out_dir) = load_run(&args)?;
            prepare_out_dir(&out_dir)?;
            let output = run_single(&run).map_err(|e| numerical(e, &run.config))?;
            let path = out_dir.join("report.json");
            write_json(&path, &output).map_err(|e| numerical(e, &run.config))?;
            println!("wrote {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep(args) => {
            let (run, out_dir) = load_run(&args)?;
            if run.sweep.is_none() {
                return Err(Failure::Config(ConfigError(
                    "the sweep subcommand needs sweep_* keys in the configuration".into(),
                )));
            }
            prepare_out_dir(&out_dir)?;
            let output = run_sweep(&run).map_err(|e| numerical(e, &run.config))?;
            let csv_path = out_dir.join("sweep.csv");
            let json_path = out_dir.join("summary.json");
            write_csv(&csv_path, &output.rows).map_err(|e| numerical(e, &run.config))?;
            write_json(&json_path, &output.summary).map_err(|e| numerical(e, &run.config))?;
            println!("wrote {}", csv_path.display());
            println!("wrote {}", json_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            config,
            seed,
            instances,
            steps,
            out,
            corrupt_closed_form,
        } => {
            if instances == 0 {
                return Err(Failure::Config(ConfigError(
                    "verify needs --instances >= 1".into(),
                )));
            }
            let config_seed = match &config {
                Some(path) => RunConfig::load(path)?.seed,
                None => None,
            };
            let opts = VerifyOptions {
                seed: seed.or(config_seed).unwrap_or(7),
                instances,
                quadrature_steps: steps,
                corrupt_closed_form,
            };
            let report = run_verify(&opts).map_err(|error| Failure::Numerical {
                error,
                config: None,
            })?;
            let text = report.render();
            print!("{text}");
            if let Some(dir) = out {
                prepare_out_dir(&dir)?;
                let path = dir.join("verify.txt");
                std::fs::write(&path, &text).map_err(|e| Failure::Numerical {
                    error: aa_phase::Error::Io {
                        path: path.display().to_string(),
                        source: e,
                    },
                    config: None,
                })?;
            }
            if report.passed {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_INVARIANT))
            }
        }
    }
}
