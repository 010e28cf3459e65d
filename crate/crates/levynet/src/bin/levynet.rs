//! Command-line front end: `simulate` emits one sampled object as JSON,
//! `compute` prints analytic quantities, `verify` runs a named acceptance
//! suite and writes its report. Exit codes: 0 success / all tests pass,
//! 1 at least one verification test failed, 2 usage or runtime error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use levynet::characterization::{find_martingale_alpha, i_alpha_closed, i_alpha_quadrature};
use levynet::csbp::{extinction_cdf, sample_csbp_path, u_lambda, LampertiConfig};
use levynet::forest::{sample_conditioned_forest, OffspringLaw};
use levynet::levy_net::skeleton_from_profile;
use levynet::report::{run_suite, RunConfig, SUITES};
use levynet::seed::stream_rng;
use levynet::snake::{metric_matrix, sample_discrete_snake, sample_gaussian_snake};
use levynet::stable::sample_path_exact;
use levynet::{Error, Result};

#[derive(Parser)]
#[command(name = "levynet", version, about = "Sampler and verification harness for stable excursions, branching processes and snake metrics")]
struct Cli {
    /// Root seed for all RNG streams.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Sample size / path length, where the subcommand needs one.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Stability index in (1, 2).
    #[arg(long, global = true)]
    alpha: Option<f64>,

    /// Output file (simulate/compute) or directory (verify). Default: stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for verification suites.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// JSON config file overriding the default run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one object and emit it as JSON.
    Simulate {
        #[command(subcommand)]
        target: SimulateTarget,
    },
    /// Print analytic quantities.
    Compute {
        #[command(subcommand)]
        target: ComputeTarget,
    },
    /// Run a verification suite and write report.json / report.md / CSVs.
    Verify {
        /// One of: characterization, drift, csbp, levynet, slices,
        /// coalescence, snake, all.
        suite: String,
    },
}

#[derive(Subcommand)]
enum SimulateTarget {
    /// A spectrally positive stable path on a uniform grid.
    Stable,
    /// A continuous-state branching path via the Lamperti time change.
    Csbp,
    /// A size-conditioned heavy-tailed forest profile.
    Forest,
    /// The rescaled skeleton (profile plus macroscopic jumps) of a forest.
    Levynet,
    /// A discrete or Gaussian snake tour with labels.
    Snake {
        /// Either "lattice" or "gaussian".
        #[arg(long, default_value = "lattice")]
        variant: String,
    },
}

#[derive(Subcommand)]
enum ComputeTarget {
    /// The jump integral I(alpha), closed form and quadrature.
    IAlpha,
    /// The root of I in (1, 2).
    Root,
    /// u_t(lambda) and the transform value exp(-u_t(lambda)).
    CsbpLaplace {
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        time: f64,
    },
    /// Extinction probability by a given time, started from mass 1.
    Extinction {
        #[arg(long, default_value_t = 1.0)]
        time: f64,
    },
    /// Interval and closed metric matrices of one sampled snake.
    Metric,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => Ok(std::fs::write(path, text)?),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let seed = cli.seed.unwrap_or(42);
    let alpha = cli.alpha.unwrap_or(1.5);
    match cli.command {
        Command::Simulate { target } => {
            let text = match target {
                SimulateTarget::Stable => {
                    let n = cli.n.unwrap_or(10_000);
                    let mut rng = stream_rng(seed, "cli-stable", 0);
                    sample_path_exact(alpha, 1.0, 1.0 / n as f64, 0.0, &mut rng)?.to_json()?
                }
                SimulateTarget::Csbp => {
                    let n = cli.n.unwrap_or(1_000);
                    let mut rng = stream_rng(seed, "cli-csbp", 0);
                    let path = sample_csbp_path(
                        alpha,
                        1.0,
                        2.0,
                        2.0 / n as f64,
                        &LampertiConfig::default(),
                        &mut rng,
                    )?;
                    serde_json::to_string(&path)?
                }
                SimulateTarget::Forest => {
                    let n = cli.n.unwrap_or(10_000);
                    let mut rng = stream_rng(seed, "cli-forest", 0);
                    let law = OffspringLaw::new(alpha)?;
                    let roots = (n as f64).powf(1.0 / alpha).round() as usize;
                    let profile = sample_conditioned_forest(&law, roots.max(1), n, 0.1, &mut rng)?;
                    serde_json::to_string(&profile)?
                }
                SimulateTarget::Levynet => {
                    let n = cli.n.unwrap_or(10_000);
                    let mut rng = stream_rng(seed, "cli-levynet", 0);
                    let law = OffspringLaw::new(alpha)?;
                    let roots = (n as f64).powf(1.0 / alpha).round() as usize;
                    let profile = sample_conditioned_forest(&law, roots.max(1), n, 0.1, &mut rng)?;
                    skeleton_from_profile(&profile, 20)?.to_json_line()?
                }
                SimulateTarget::Snake { variant } => {
                    let n = cli.n.unwrap_or(1_024);
                    let mut rng = stream_rng(seed, "cli-snake", 0);
                    let sample = match variant.as_str() {
                        "lattice" => sample_discrete_snake(n, &mut rng)?,
                        "gaussian" => sample_gaussian_snake(n, &mut rng)?,
                        other => {
                            return Err(Error::Config(format!(
                                "unknown snake variant '{other}' (expected lattice or gaussian)"
                            )))
                        }
                    };
                    sample.to_json()?
                }
            };
            emit(cli.out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Compute { target } => {
            let text = match target {
                ComputeTarget::IAlpha => format!(
                    "I({alpha}) closed = {:.12}, quadrature = {:.12}",
                    i_alpha_closed(alpha)?,
                    i_alpha_quadrature(alpha)?
                ),
                ComputeTarget::Root => {
                    format!("root of I in (1, 2): {:.9}", find_martingale_alpha(1e-9)?)
                }
                ComputeTarget::CsbpLaplace { lambda, time } => {
                    let u = u_lambda(alpha, lambda, time)?;
                    format!(
                        "u_{time}({lambda}) = {u:.9}; E[exp(-{lambda} Y_{time})] = {:.9}",
                        (-u).exp()
                    )
                }
                ComputeTarget::Extinction { time } => format!(
                    "P[extinct by t = {time} | Y_0 = 1, alpha = {alpha}] = {:.9}",
                    extinction_cdf(alpha, 1.0, time)?
                ),
                ComputeTarget::Metric => {
                    let n = cli.n.unwrap_or(512);
                    let mut rng = stream_rng(seed, "cli-metric", 0);
                    let sample = sample_discrete_snake(n, &mut rng)?;
                    let mm = metric_matrix(&sample, n.min(64))?;
                    serde_json::to_string(&mm)?
                }
            };
            emit(cli.out.as_deref(), &text)?;
            Ok(true)
        }
        Command::Verify { suite } => {
            let mut cfg = match &cli.config {
                Some(path) => RunConfig::from_json_file(path)?,
                None => RunConfig::default(),
            };
            if let Some(seed) = cli.seed {
                cfg.root_seed = seed;
            }
            if let Some(jobs) = cli.jobs {
                cfg.jobs = jobs;
            }
            let report = run_suite(&suite, &cfg)?;
            let out_dir = cli
                .out
                .clone()
                .or_else(|| cfg.out_dir.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("verify-out"));
            report.write_outputs(&out_dir)?;
            println!("{}", report.to_markdown());
            println!(
                "suites available: {SUITES:?}; outputs written to {}",
                out_dir.display()
            );
            Ok(report.all_passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            if matches!(err, Error::Config(_)) {
                eprintln!("run with --help for usage");
            }
            ExitCode::from(2)
        }
    }
}
