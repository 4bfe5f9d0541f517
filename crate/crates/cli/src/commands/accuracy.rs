use std::path::PathBuf;

use clap::Args;
use fastkde::{ise, silverman_bandwidth, timed, BandwidthKernel, EvaluationGrid};
use rayon::prelude::*;

use super::{check_methods, density, evaluate, join};
use crate::error::{CliError, Result};
use crate::method::{parse_label, Engine, Method};
use crate::output::{density_meta, num, rng_meta, ResultsWriter};
use crate::threads;

#[derive(Debug, Clone, Args)]
pub struct AccuracyArgs {
    /// Benchmark density a..h.
    #[arg(long, default_value = "a", value_parser = parse_label)]
    pub density: char,
    /// Sample sizes.
    #[arg(long, value_delimiter = ',', default_value = "1000,100000")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 30)]
    pub reps: usize,
    /// Derivative order.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub k: u8,
    /// Comma-separated exact-K<α>, binned-K<α>, naive-K<α> (or naive).
    #[arg(long, value_delimiter = ',', default_value = "exact-K1,exact-K4")]
    pub methods: Vec<Method>,
    /// Replication r draws its sample with seed + r.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Bin count for binned methods.
    #[arg(long, default_value_t = 4096)]
    pub bins: usize,
    /// Simpson points for the integrated squared error.
    #[arg(long, default_value_t = fastkde::metrics::ISE_POINTS)]
    pub ise_points: usize,
    /// Fill the seconds column; without it the output is byte-identical across runs.
    #[arg(long)]
    pub record_time: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl AccuracyArgs {
    pub fn new(density: char, n: Vec<usize>, reps: usize, k: u8, methods: Vec<Method>, seed: u64) -> Self {
        AccuracyArgs {
            density,
            n,
            reps,
            k,
            methods,
            seed,
            bins: 4096,
            ise_points: fastkde::metrics::ISE_POINTS,
            record_time: false,
            output: None,
        }
    }
}

/// One replication of one method.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub method: Method,
    pub density: char,
    pub n: usize,
    pub m: usize,
    /// Bin count, 0 for unbinned methods.
    pub b: usize,
    pub k: usize,
    pub rep: usize,
    pub seed: u64,
    pub error: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub method: Method,
    pub n: usize,
    pub reps: usize,
    pub mean_error: f64,
    pub std_error: f64,
    pub mean_seconds: f64,
}

/// All replication records, ordered by `n`, replication, then method.
pub fn records(args: &AccuracyArgs) -> Result<Vec<ExperimentRecord>> {
    let order = args.k as usize;
    check_methods(&args.methods, order, args.density)?;
    if args.reps == 0 || args.n.is_empty() {
        return Err(CliError::Usage("need at least one replication and one sample size".into()));
    }
    let d = density(args.density)?;
    let (lo, hi) = d.integration_range();
    let grid = EvaluationGrid::new(lo, hi, args.ise_points).map_err(|e| CliError::Usage(e.to_string()))?;
    let kernels = args.methods.iter().map(|m| m.kernel()).collect::<Result<Vec<_>>>()?;
    let pool = threads::pool()?;

    let mut out = Vec::with_capacity(args.n.len() * args.reps * args.methods.len());
    for &n in &args.n {
        if n < 2 {
            return Err(CliError::Usage("sample sizes must be at least 2".into()));
        }
        let per_rep: Vec<Result<Vec<ExperimentRecord>>> = pool.install(|| {
            (0..args.reps)
                .into_par_iter()
                .map(|rep| {
                    let seed = args.seed.wrapping_add(rep as u64);
                    let x = d.sample(n, seed);
                    let mut rows = Vec::with_capacity(args.methods.len());
                    for (&method, kernel) in args.methods.iter().zip(&kernels) {
                        let h = silverman_bandwidth(&x, BandwidthKernel::PolyExp(kernel), order)?;
                        let (est, secs) = timed(|| evaluate(method, kernel, &x, h, order, Some(grid.points()), args.bins));
                        let est = est?;
                        let error = if order == 0 {
                            ise(&est, |t| d.pdf(t), &grid)?
                        } else {
                            ise(&est, |t| d.dpdf(t).unwrap_or(f64::NAN), &grid)?
                        };
                        rows.push(ExperimentRecord {
                            method,
                            density: d.label(),
                            n,
                            m: grid.m(),
                            b: if method.engine == Engine::Binned { args.bins } else { 0 },
                            k: order,
                            rep,
                            seed,
                            error,
                            seconds: if args.record_time { secs } else { 0.0 },
                        });
                    }
                    Ok(rows)
                })
                .collect()
        });
        for rows in per_rep {
            out.extend(rows?);
        }
    }
    Ok(out)
}

/// Mean error (with its standard error) and mean time per `(n, method)`, in
/// first-appearance order.
pub fn summarize(records: &[ExperimentRecord]) -> Vec<Summary> {
    let mut keys: Vec<(usize, Method)> = Vec::new();
    for r in records {
        if !keys.contains(&(r.n, r.method)) {
            keys.push((r.n, r.method));
        }
    }
    keys.into_iter()
        .map(|(n, method)| {
            let rows: Vec<&ExperimentRecord> = records.iter().filter(|r| r.n == n && r.method == method).collect();
            let reps = rows.len();
            let mean = rows.iter().map(|r| r.error).sum::<f64>() / reps as f64;
            let var = if reps > 1 {
                rows.iter().map(|r| (r.error - mean).powi(2)).sum::<f64>() / (reps - 1) as f64
            } else {
                0.0
            };
            Summary {
                method,
                n,
                reps,
                mean_error: mean,
                std_error: (var / reps as f64).sqrt(),
                mean_seconds: rows.iter().map(|r| r.seconds).sum::<f64>() / reps as f64,
            }
        })
        .collect()
}

pub fn run(args: &AccuracyArgs) -> Result<()> {
    let recs = records(args)?;
    let d = density(args.density)?;
    let meta = [
        ("command", "bench-accuracy".to_string()),
        ("methods", join(&args.methods)),
        ("n", join(&args.n)),
        ("reps", args.reps.to_string()),
        ("k", args.k.to_string()),
        ("seed", args.seed.to_string()),
        ("bandwidth", "silverman".to_string()),
        ("error", format!("ISE by composite Simpson on {} points over mean ± 5 sd", args.ise_points)),
        rng_meta(),
        density_meta(&d),
    ];
    let mut out = ResultsWriter::create(args.output.as_deref(), &meta)?;
    out.row(["kind", "method", "density", "n", "m", "b", "k", "rep", "seed", "error", "std_error", "seconds"])?;
    for r in &recs {
        out.row([
            "rep".to_string(),
            r.method.to_string(),
            r.density.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.b.to_string(),
            r.k.to_string(),
            r.rep.to_string(),
            r.seed.to_string(),
            num(r.error),
            String::new(),
            num(r.seconds),
        ])?;
    }
    for s in summarize(&recs) {
        let first = recs.iter().find(|r| r.n == s.n && r.method == s.method).expect("summary from records");
        out.row([
            "mean".to_string(),
            s.method.to_string(),
            first.density.to_string(),
            s.n.to_string(),
            first.m.to_string(),
            first.b.to_string(),
            first.k.to_string(),
            s.reps.to_string(),
            args.seed.to_string(),
            num(s.mean_error),
            num(s.std_error),
            num(s.mean_seconds),
        ])?;
    }
    out.finish()
}
