use std::path::PathBuf;

use clap::Args;
use fastkde::{binned_kde_at, linear_bin, silverman_bandwidth, BandwidthKernel, Estimator, Queries};

use crate::error::{CliError, Result};
use crate::input::read_sample;
use crate::method::{BandwidthSpec, KernelSpec};
use crate::output::{num, ResultsWriter};

pub const DEFAULT_GRID: usize = 512;

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    /// Data file: one number per line, or a single-column CSV with optional header.
    #[arg(long)]
    pub input: PathBuf,
    /// Results file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// k1, k4, k7 or alpha=N.
    #[arg(long, default_value = "k4")]
    pub kernel: KernelSpec,
    /// `silverman` or a positive bandwidth.
    #[arg(long, default_value = "silverman")]
    pub bandwidth: BandwidthSpec,
    /// Also write the first derivative.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub deriv: u8,
    /// Evaluate on M equispaced points over [lo, hi] (default 512).
    #[arg(long, conflicts_with = "at_samples")]
    pub grid: Option<usize>,
    /// Evaluate at the data points, in input order.
    #[arg(long)]
    pub at_samples: bool,
    /// Grid start; defaults to min(x) − 4σ_K·h.
    #[arg(long, allow_negative_numbers = true)]
    pub lo: Option<f64>,
    /// Grid end; defaults to max(x) + 4σ_K·h.
    #[arg(long, allow_negative_numbers = true)]
    pub hi: Option<f64>,
    /// Use the linearly binned estimator with B bins (density only).
    #[arg(long)]
    pub bins: Option<usize>,
    /// Recorded in the metadata; estimation itself is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// `m` equispaced points from `lo` to `hi` inclusive.
pub fn grid(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    let step = (hi - lo) / (m - 1) as f64;
    (0..m).map(|i| if i + 1 == m { hi } else { lo + step * i as f64 }).collect()
}

pub fn run(args: &EstimateArgs) -> Result<()> {
    let order = args.deriv as usize;
    if order == 1 && args.bins.is_some() {
        return Err(CliError::Usage("--deriv 1 cannot be combined with --bins: binned derivatives are not supported".into()));
    }
    if args.at_samples && (args.lo.is_some() || args.hi.is_some()) {
        return Err(CliError::Usage("--lo/--hi only apply to --grid evaluation".into()));
    }
    let kernel = args.kernel.build()?;
    if order == 1 {
        kernel.derivative().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let x = read_sample(&args.input)?;
    let (h, rule) = match args.bandwidth {
        BandwidthSpec::Fixed(h) => (h, "fixed"),
        BandwidthSpec::Silverman => (silverman_bandwidth(&x, BandwidthKernel::PolyExp(&kernel), order)?, "silverman"),
    };

    let queries = if args.at_samples {
        None
    } else {
        let m = args.grid.unwrap_or(DEFAULT_GRID);
        if m < 2 {
            return Err(CliError::Usage("--grid needs at least 2 points".into()));
        }
        let reach = 4.0 * kernel.variance().sqrt() * h;
        let lo = args.lo.unwrap_or_else(|| x.iter().cloned().fold(f64::INFINITY, f64::min) - reach);
        let hi = args.hi.unwrap_or_else(|| x.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + reach);
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(CliError::Usage(format!("grid needs finite lo < hi, got [{lo}, {hi}]")));
        }
        Some(grid(lo, hi, m))
    };
    let points = queries.as_deref().unwrap_or(&x);

    let (density, derivative, evaluator) = match args.bins {
        Some(b) => {
            let bs = linear_bin(&x, b).map_err(|e| CliError::Usage(e.to_string()))?;
            (binned_kde_at(&bs, &kernel, h, points)?, None, format!("binned (b = {b})"))
        }
        None => {
            let est = Estimator::new(&x, &kernel, h)?;
            let q = match &queries {
                Some(g) => Queries::Points(g),
                None => Queries::AtSamples,
            };
            let d = if order == 1 { Some(est.derivative(q)?) } else { None };
            (est.density(q)?, d, "exact".to_string())
        }
    };

    let meta = [
        ("command", "estimate".to_string()),
        ("kernel", format!("K{}", kernel.alpha())),
        ("bandwidth", format!("{} ({rule})", num(h))),
        ("evaluator", evaluator),
        ("n", x.len().to_string()),
        ("seed", args.seed.to_string()),
    ];
    let mut out = ResultsWriter::create(args.output.as_deref(), &meta)?;
    match &derivative {
        Some(_) => out.row(["query", "density", "derivative"])?,
        None => out.row(["query", "density"])?,
    }
    for (i, (&q, &f)) in points.iter().zip(&density).enumerate() {
        match &derivative {
            Some(d) => out.row([num(q), num(f), num(d[i])])?,
            None => out.row([num(q), num(f)])?,
        }
    }
    out.finish()
}
