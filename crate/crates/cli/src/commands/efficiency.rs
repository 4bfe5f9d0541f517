use std::path::PathBuf;

use clap::Args;
use fastkde::{Kernel, ReferenceKernel};

use crate::error::{CliError, Result};
use crate::output::{num, ResultsWriter};

#[derive(Debug, Clone, Args)]
pub struct EfficiencyArgs {
    /// Derivative order.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub k: u8,
    #[arg(long, default_value_t = 15)]
    pub alpha_max: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyRow {
    /// `None` for the Gaussian reference row.
    pub alpha: Option<usize>,
    pub efficiency: f64,
    pub relative: f64,
}

/// One row per `K_α` (from `α = 1` for derivatives) and a Gaussian row last.
pub fn table(k: usize, alpha_max: usize) -> Result<Vec<EfficiencyRow>> {
    let start = k.min(1);
    if alpha_max < start {
        return Err(CliError::Usage(format!("--alpha-max must be at least {start} for k = {k}")));
    }
    let mut rows = Vec::with_capacity(alpha_max + 2);
    for alpha in start..=alpha_max {
        let kern = Kernel::k_alpha(alpha).map_err(|e| CliError::Usage(e.to_string()))?;
        rows.push(EfficiencyRow {
            alpha: Some(alpha),
            efficiency: kern.efficiency(k)?,
            relative: kern.relative_efficiency(k)?,
        });
    }
    let g = ReferenceKernel::Gaussian;
    rows.push(EfficiencyRow { alpha: None, efficiency: g.efficiency(k)?, relative: g.relative_efficiency(k)? });
    Ok(rows)
}

pub fn run(args: &EfficiencyArgs) -> Result<()> {
    let k = args.k as usize;
    let rows = table(k, args.alpha_max)?;
    let reference = if k == 0 { "epanechnikov" } else { "biweight" };
    let meta = [("command", "efficiency-table".to_string()), ("k", k.to_string()), ("reference", reference.to_string())];
    let mut out = ResultsWriter::create(args.output.as_deref(), &meta)?;
    out.row(["kernel", "alpha", "eff", "releff"])?;
    for r in rows {
        let (name, alpha) = match r.alpha {
            Some(a) => (format!("K{a}"), a.to_string()),
            None => ("gaussian".to_string(), String::new()),
        };
        out.row([name, alpha, num(r.efficiency), num(r.relative)])?;
    }
    out.finish()
}
