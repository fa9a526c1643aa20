use std::path::PathBuf;

use clap::Args;
use hyperlim::hypergraphon::{exact_density_with_budget, DEFAULT_DENSITY_BUDGET};
use hyperlim::regularity::{
    cell_approximation, cell_stats, check_regularity_sampled, equitability, latent_hyperpartition,
    DEFAULT_DENSITY_GRID,
};
use hyperlim::rng::derive_seed;
use hyperlim::{hom_density, sample_w_random, Error};
use rayon::prelude::*;

use crate::{load_hypergraph, load_hypergraphon, output, write, CliResult};

/// Seed label of the `(n, rep)` samples in the convergence experiment.
pub const CONVERGENCE_LABEL: &str = "experiment/convergence";
/// Seed label of the cylinder draws for class `(r, j)` in the regularity experiment.
pub const REGULARITY_CYLINDER_LABEL: &str = "experiment/regularity/cylinders";

pub const CONVERGENCE_HEADER: &str = "K,n,rep,t_H,t_W,abs_diff";
pub const REGULARITY_HEADER: &str = "metric,r,class,value";

#[derive(Args)]
pub struct ConvergenceArgs {
    /// Indicator step hypergraphon (HGON).
    pub w: PathBuf,
    /// Patterns (HG); the file stem names each in the output.
    #[arg(required = true)]
    pub k: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = [20, 40, 80])]
    pub ns: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DENSITY_BUDGET)]
    pub budget: u128,
}

#[derive(Args)]
pub struct RegularityArgs {
    /// Indicator step hypergraphon (HGON).
    pub w: PathBuf,
    #[arg(long)]
    pub n: usize,
    /// Partition resolution; defaults to the resolution of W.
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long = "M", default_value_t = 200)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => write(path, text),
        None => crate::stdout_write(text),
    }
}

fn pattern_name(path: &std::path::Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// The sample for `(n, rep)` is shared by every pattern.
pub fn convergence(args: &ConvergenceArgs) -> CliResult<()> {
    if args.reps == 0 || args.ns.is_empty() || args.ns.contains(&0) {
        return Err(Error::InvalidArgument("--reps and every entry of --ns must be positive".into()).into());
    }
    let w = load_hypergraphon(&args.w)?;
    let patterns = args
        .k
        .iter()
        .map(|p| load_hypergraph(p).map(|k| (pattern_name(p), k)))
        .collect::<CliResult<Vec<_>>>()?;
    let exact = patterns
        .iter()
        .map(|(_, k)| exact_density_with_budget(k, &w, args.budget))
        .collect::<hyperlim::Result<Vec<f64>>>()?;

    let jobs: Vec<(usize, usize)> = args
        .ns
        .iter()
        .flat_map(|&n| (0..args.reps).map(move |rep| (n, rep)))
        .collect();
    // observed[job][pattern]
    let observed = jobs
        .par_iter()
        .map(|&(n, rep)| {
            let seed = derive_seed(args.seed, CONVERGENCE_LABEL, &[n as u64, rep as u64]);
            let h = sample_w_random(&w, n, seed)?.into_hypergraph();
            patterns
                .iter()
                .map(|(_, k)| hom_density(k, &h).map(|t| t.to_f64()))
                .collect::<hyperlim::Result<Vec<f64>>>()
        })
        .collect::<hyperlim::Result<Vec<Vec<f64>>>>()?;

    let mut text = format!("{CONVERGENCE_HEADER}\n");
    for (p, (name, _)) in patterns.iter().enumerate() {
        let t_w = exact[p];
        for (block, &n) in args.ns.iter().enumerate() {
            let rows = &observed[block * args.reps..(block + 1) * args.reps];
            let mut sum_t = 0.0;
            let mut sum_diff = 0.0;
            for (rep, row) in rows.iter().enumerate() {
                let t_h = row[p];
                let diff = (t_h - t_w).abs();
                sum_t += t_h;
                sum_diff += diff;
                text += &format!(
                    "{name},{n},{rep},{},{},{}\n",
                    output::real(t_h),
                    output::real(t_w),
                    output::real(diff)
                );
            }
            let reps = args.reps as f64;
            text += &format!(
                "{name},{n},mean,{},{},{}\n",
                output::real(sum_t / reps),
                output::real(t_w),
                output::real(sum_diff / reps)
            );
        }
    }
    emit(&args.out, &text)
}

/// `H` is drawn with `--seed` itself, so it matches `sample --seed`.
pub fn regularity(args: &RegularityArgs) -> CliResult<()> {
    let w = load_hypergraphon(&args.w)?;
    let l = args.l.unwrap_or(w.resolution());
    let sample = sample_w_random(&w, args.n, args.seed)?;
    let p = latent_hyperpartition(&sample, l)?;
    let k = w.arity();

    let mut text = format!("{REGULARITY_HEADER}\n");
    let eq = equitability(&p);
    for (r, delta) in eq.per_level.iter().enumerate() {
        text += &format!("equitability,{},,{delta}\n", r + 1);
    }

    let classes: Vec<(usize, u16)> = (2..=k)
        .flat_map(|r| (0..l as u16).map(move |j| (r, j)))
        .collect();
    let reports = classes
        .par_iter()
        .map(|&(r, j)| {
            let g = p.class_hypergraph(r, j);
            let seed = derive_seed(args.seed, REGULARITY_CYLINDER_LABEL, &[r as u64, j as u64]);
            check_regularity_sampled(&g, args.eps, args.m, seed, &DEFAULT_DENSITY_GRID, &[])
                .map(|report| (g.edge_count(), report))
        })
        .collect::<hyperlim::Result<Vec<_>>>()?;
    for (&(r, j), (size, report)) in classes.iter().zip(&reports) {
        text += &format!("class_size,{r},{j},{size}\n");
        text += &format!("tested,{r},{j},{}\n", report.tested);
        text += &format!("admitted,{r},{j},{}\n", report.admitted);
        text += &format!("max_deviation,{r},{j},{}\n", report.max_deviation);
        text += &format!("witness,{r},{j},{}\n", report.witness.is_some());
    }

    let h = sample.hypergraph();
    let cells = cell_stats(h, &p)?;
    let approx = cell_approximation(h, &p)?;
    let impure = cells.values().filter(|s| s.edges != 0 && s.edges != s.size).count();
    text += &format!("cells,,,{}\n", cells.len());
    text += &format!("impure_cells,,,{impure}\n");
    text += &format!("cell_error,,,{}\n", approx.fraction());
    text += &format!("cell_error_real,,,{}\n", output::ratio_real(&approx.fraction()));
    emit(&args.out, &text)
}
