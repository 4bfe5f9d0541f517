use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use fastkde::{silverman_bandwidth, timed, BandwidthKernel};

use super::{check_methods, density, evaluate, join};
use crate::error::{CliError, Result};
use crate::method::{parse_label, Engine, Method};
use crate::output::{density_meta, num, rng_meta, ResultsWriter};

/// Naive rows are skipped above this many kernel evaluations.
pub const NAIVE_LIMIT: f64 = 1e8;

/// Where to evaluate: at the sample itself or on an `m`-point grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuerySet {
    Samples,
    Grid(usize),
}

impl QuerySet {
    pub fn count(self, n: usize) -> usize {
        match self {
            QuerySet::Samples => n,
            QuerySet::Grid(m) => m,
        }
    }
}

impl FromStr for QuerySet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("samples") {
            return Ok(QuerySet::Samples);
        }
        match s.parse::<usize>() {
            Ok(m) if m >= 2 => Ok(QuerySet::Grid(m)),
            _ => Err(format!("query set must be 'samples' or a grid size ≥ 2, got {s:?}")),
        }
    }
}

impl fmt::Display for QuerySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuerySet::Samples => f.write_str("samples"),
            QuerySet::Grid(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpeedArgs {
    #[arg(long, default_value = "d", value_parser = parse_label)]
    pub density: char,
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
    pub n_list: Vec<usize>,
    /// Grid sizes, or `samples` for evaluation at the data.
    #[arg(long, value_delimiter = ',', default_value = "samples,1000")]
    pub m_list: Vec<QuerySet>,
    #[arg(long, value_delimiter = ',', default_value = "exact-K1,exact-K4,binned-K1,binned-K4,naive")]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    /// Derivative order.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub k: u8,
    #[arg(long, default_value_t = 4096)]
    pub bins: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Timing {
    pub method: Method,
    pub n: usize,
    pub queries: QuerySet,
    pub reps: usize,
    pub mean_seconds: f64,
    pub min_seconds: f64,
}

/// Times sorting, table construction and evaluation; sampling and bandwidth
/// selection are excluded. Runs are sequential so they do not contend.
pub fn timings(args: &SpeedArgs) -> Result<Vec<Timing>> {
    let order = args.k as usize;
    check_methods(&args.methods, order, args.density)?;
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be positive".into()));
    }
    let d = density(args.density)?;
    let (lo, hi) = d.integration_range();
    let mut out = Vec::new();
    for &n in &args.n_list {
        if n < 2 {
            return Err(CliError::Usage("sample sizes must be at least 2".into()));
        }
        let x = d.sample(n, args.seed);
        for &qs in &args.m_list {
            let grid = match qs {
                QuerySet::Samples => None,
                QuerySet::Grid(m) => Some(super::estimate::grid(lo, hi, m)),
            };
            for &method in &args.methods {
                if method.engine == Engine::Naive && (n as f64) * (qs.count(n) as f64) > NAIVE_LIMIT {
                    continue;
                }
                let kernel = method.kernel()?;
                let h = silverman_bandwidth(&x, BandwidthKernel::PolyExp(&kernel), order)?;
                let mut secs = Vec::with_capacity(args.reps);
                for _ in 0..args.reps {
                    let (r, s) = timed(|| evaluate(method, &kernel, &x, h, order, grid.as_deref(), args.bins));
                    r?;
                    secs.push(s);
                }
                out.push(Timing {
                    method,
                    n,
                    queries: qs,
                    reps: args.reps,
                    mean_seconds: secs.iter().sum::<f64>() / secs.len() as f64,
                    min_seconds: secs.iter().cloned().fold(f64::INFINITY, f64::min),
                });
            }
        }
    }
    Ok(out)
}

pub fn run(args: &SpeedArgs) -> Result<()> {
    let rows = timings(args)?;
    let d = density(args.density)?;
    let meta = [
        ("command", "bench-speed".to_string()),
        ("methods", join(&args.methods)),
        ("n", join(&args.n_list)),
        ("m", join(&args.m_list)),
        ("reps", args.reps.to_string()),
        ("k", args.k.to_string()),
        ("seed", args.seed.to_string()),
        ("naive limit", format!("n*m <= {NAIVE_LIMIT:e}")),
        rng_meta(),
        density_meta(&d),
    ];
    let mut out = ResultsWriter::create(args.output.as_deref(), &meta)?;
    out.row(["method", "density", "n", "queries", "m", "b", "k", "reps", "seed", "mean_seconds", "min_seconds"])?;
    for t in rows {
        let b = if t.method.engine == Engine::Binned { args.bins } else { 0 };
        let kind = if t.queries == QuerySet::Samples { "samples" } else { "grid" };
        out.row([
            t.method.to_string(),
            d.label().to_string(),
            t.n.to_string(),
            kind.to_string(),
            t.queries.count(t.n).to_string(),
            b.to_string(),
            args.k.to_string(),
            t.reps.to_string(),
            args.seed.to_string(),
            num(t.mean_seconds),
            num(t.min_seconds),
        ])?;
    }
    out.finish()
}
