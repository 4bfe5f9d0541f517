use std::path::PathBuf;

use clap::Args;
use fastkde::catalog;
use fastkde::densities::DensityForm;

use crate::error::Result;
use crate::output::{num, rng_meta, ResultsWriter};

#[derive(Debug, Clone, Args)]
pub struct DensitiesArgs {
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// The benchmark catalog, one row per mixture component or uniform member.
pub fn run(args: &DensitiesArgs) -> Result<()> {
    let meta = [("command", "densities".to_string()), rng_meta()];
    let mut out = ResultsWriter::create(args.output.as_deref(), &meta)?;
    out.row(["label", "name", "component", "weight", "mean", "sd", "lo", "hi"])?;
    for d in catalog() {
        let label = d.label().to_string();
        match d.form() {
            DensityForm::Uniform { lo, hi } => {
                out.row([label, d.name().into(), "0".into(), "1".into(), String::new(), String::new(), num(*lo), num(*hi)])?
            }
            DensityForm::Mixture(m) => {
                for (i, ((w, mu), s)) in m.weights().iter().zip(m.means()).zip(m.sds()).enumerate() {
                    out.row([
                        label.clone(),
                        d.name().into(),
                        i.to_string(),
                        num(*w),
                        num(*mu),
                        num(*s),
                        String::new(),
                        String::new(),
                    ])?;
                }
            }
        }
    }
    out.finish()
}
