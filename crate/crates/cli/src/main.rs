//! `hyperlim` command-line front end.

mod experiment;
mod output;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hyperlim::hypergraphon::{exact_density_with_budget, mc_density, DEFAULT_DENSITY_BUDGET};
use hyperlim::regularity::{
    cell_approximation, cell_stats, check_regularity_exhaustive, check_regularity_sampled,
    Hyperpartition, RegularityReport, DEFAULT_DENSITY_GRID,
};
use hyperlim::removal::{removal_experiment_with, Method, DEFAULT_SEARCH_BUDGET, REMOVAL_CSV_HEADER};
use hyperlim::homomorphism::DEFAULT_IMAGE_CAP;
use hyperlim::{hom_count, sample_w_random, StepHypergraphon, UniformHypergraph};

use experiment::{ConvergenceArgs, RegularityArgs};

#[derive(Parser)]
#[command(name = "hyperlim", version, about = "Hypergraph homomorphism densities, hypergraphons, regularity and removal experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count homomorphisms K -> H and print the exact density.
    Hom { k: PathBuf, h: PathBuf },
    /// Density of K in a step hypergraphon.
    Density {
        k: PathBuf,
        w: PathBuf,
        #[arg(long, value_enum, default_value_t = DensityMode::Exact)]
        mode: DensityMode,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest number of box assignments exact mode may visit.
        #[arg(long, default_value_t = DEFAULT_DENSITY_BUDGET)]
        budget: u128,
    },
    /// Draw a W-random hypergraph.
    Sample {
        w: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// HG output; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the latent coordinates (LAT format).
        #[arg(long)]
        latents: Option<PathBuf>,
    },
    /// Per-cell sizes and edge densities of H under a hyperpartition.
    Cells { h: PathBuf, p: PathBuf },
    /// Check an r-uniform hypergraph against cylinder intersections.
    Regularity {
        g: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long = "M", default_value_t = 200)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Try every cylinder intersection instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
    },
    /// Find and verify an edge set whose removal kills every copy of K.
    Removal {
        k: PathBuf,
        h: PathBuf,
        #[arg(long, value_enum, default_value_t = RemovalMode::Exact)]
        mode: RemovalMode,
        #[arg(long, default_value_t = DEFAULT_IMAGE_CAP)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        /// Instance column of the CSV row; defaults to the H file stem.
        #[arg(long)]
        instance: Option<String>,
    },
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// t(K, H_n) against t(K, W) for W-random H_n of growing size.
    Convergence(ConvergenceArgs),
    /// Latent hyperpartition diagnostics for a W-random sample.
    Regularity(RegularityArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DensityMode {
    Exact,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum RemovalMode {
    Exact,
    Greedy,
}

#[derive(Debug)]
pub enum CliError {
    Core(hyperlim::Error),
    Io(PathBuf, io::Error),
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(hyperlim::Error::BudgetExceeded(_)) => 3,
            CliError::Core(_) | CliError::Io(..) => 2,
            CliError::Verification(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<hyperlim::Error> for CliError {
    fn from(e: hyperlim::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))
}

pub fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io(path.to_owned(), e))
}

/// Parse errors are prefixed with the file they came from.
fn with_path<T>(path: &Path, r: hyperlim::Result<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        hyperlim::Error::Parse { line, message } => CliError::Core(hyperlim::Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        }),
        other => CliError::Core(other),
    })
}

pub fn load_hypergraph(path: &Path) -> CliResult<UniformHypergraph> {
    with_path(path, UniformHypergraph::parse(&read(path)?))
}

pub fn load_hypergraphon(path: &Path) -> CliResult<StepHypergraphon> {
    with_path(path, StepHypergraphon::parse(&read(path)?))
}

fn stdout_write(text: &str) -> CliResult<()> {
    io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e))
}

fn regularity_line(r: usize, report: &RegularityReport) -> String {
    format!(
        "{},{r},{},{},{},{},{}\n",
        report.mode.tag(),
        report.tested,
        report.admitted,
        report.max_deviation,
        output::real(report.epsilon),
        report.is_regular()
    )
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Hom { k, h } => {
            let (k, h) = (load_hypergraph(&k)?, load_hypergraph(&h)?);
            let c = hom_count(&k, &h)?;
            stdout_write(&format!("hom={} t={}\n", c.count, c.density()?))
        }
        Command::Density {
            k,
            w,
            mode,
            samples,
            seed,
            budget,
        } => {
            let (k, w) = (load_hypergraph(&k)?, load_hypergraphon(&w)?);
            match mode {
                DensityMode::Exact => {
                    let t = exact_density_with_budget(&k, &w, budget)?;
                    stdout_write(&format!("{}\n", output::real(t)))
                }
                DensityMode::Mc => {
                    let est = mc_density(&k, &w, samples, seed)?;
                    eprintln!(
                        "standard_error={} samples={} seed={}",
                        output::real(est.standard_error),
                        est.n_samples,
                        est.seed
                    );
                    stdout_write(&format!("{}\n", output::real(est.estimate)))
                }
            }
        }
        Command::Sample {
            w,
            n,
            seed,
            out,
            latents,
        } => {
            let w = load_hypergraphon(&w)?;
            let sample = sample_w_random(&w, n, seed)?;
            if let Some(path) = latents {
                write(&path, &sample.to_lat_string())?;
            }
            let text = sample.hypergraph().to_hg_string();
            match out {
                Some(path) => write(&path, &text),
                None => stdout_write(&text),
            }
        }
        Command::Cells { h, p } => {
            let h = load_hypergraph(&h)?;
            let p = with_path(&p, Hyperpartition::parse(&read(&p)?))?;
            let stats = cell_stats(&h, &p)?;
            let mut text = String::from("profile,size,edges,density\n");
            for (cell, s) in &stats {
                text += &format!("{cell},{},{},{}\n", s.size, s.edges, s.density());
            }
            let approx = cell_approximation(&h, &p)?;
            eprintln!(
                "cells={} symmetric_difference={} fraction={}",
                stats.len(),
                approx.symmetric_difference,
                approx.fraction()
            );
            stdout_write(&text)
        }
        Command::Regularity {
            g,
            eps,
            m,
            seed,
            exhaustive,
            budget,
        } => {
            let g = load_hypergraph(&g)?;
            let report = if exhaustive {
                check_regularity_exhaustive(&g, eps, budget)?
            } else {
                check_regularity_sampled(&g, eps, m, seed, &DEFAULT_DENSITY_GRID, &[])?
            };
            let mut text = String::from("mode,r,tested,admitted,max_deviation,epsilon,regular\n");
            text += &regularity_line(g.arity(), &report);
            if let Some(w) = &report.witness {
                eprintln!("witness:");
                for part in w.parts() {
                    eprint!("{}", part.to_hg_string());
                }
            }
            stdout_write(&text)
        }
        Command::Removal {
            k,
            h,
            mode,
            cap,
            budget,
            instance,
        } => {
            let instance = instance.unwrap_or_else(|| {
                h.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            });
            let (k, h) = (load_hypergraph(&k)?, load_hypergraph(&h)?);
            let method = match mode {
                RemovalMode::Exact => Method::Exact,
                RemovalMode::Greedy => Method::Greedy,
            };
            let r = removal_experiment_with(&k, &h, method, cap, budget)?;
            stdout_write(&format!("{REMOVAL_CSV_HEADER}\n{}\n", r.csv_row(&instance)))?;
            if r.verified {
                Ok(())
            } else if r.truncated {
                Err(CliError::Verification(format!(
                    "image enumeration stopped at {cap}; residual t={}",
                    r.residual
                )))
            } else {
                Err(CliError::Verification(format!("residual t={}", r.residual)))
            }
        }
        Command::Experiment(ExperimentCommand::Convergence(args)) => experiment::convergence(&args),
        Command::Experiment(ExperimentCommand::Regularity(args)) => experiment::regularity(&args),
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("HYPERLIM_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.trim().parse().map_err(|_| {
        CliError::Core(hyperlim::Error::InvalidArgument(format!(
            "HYPERLIM_THREADS must be a positive integer, got `{value}`"
        )))
    })?;
    if threads == 0 {
        return Err(CliError::Core(hyperlim::Error::InvalidArgument("HYPERLIM_THREADS must be positive".into())));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Core(hyperlim::Error::InvalidArgument(e.to_string())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
