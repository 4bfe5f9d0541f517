use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use fastkde::densities::{DensityForm, RNG_ALGORITHM};
use fastkde::BenchmarkDensity;

use crate::error::{CliError, Result};

pub const SCHEMA_LINE: &str = "# fastkde-results v1";

/// Versioned CSV: the schema line, `# key: value` metadata, then RFC 4180 rows.
pub struct ResultsWriter {
    csv: csv::Writer<Box<dyn Write>>,
}

impl ResultsWriter {
    pub fn create(path: Option<&Path>, meta: &[(&str, String)]) -> Result<Self> {
        let mut sink: Box<dyn Write> = match path {
            Some(p) => {
                let f = File::create(p).map_err(|e| CliError::io(format!("cannot write {}", p.display()), e))?;
                Box::new(BufWriter::new(f))
            }
            None => Box::new(BufWriter::new(io::stdout())),
        };
        let io_err = |e| CliError::io("writing results", e);
        writeln!(sink, "{SCHEMA_LINE}").map_err(io_err)?;
        for (k, v) in meta {
            writeln!(sink, "# {k}: {v}").map_err(io_err)?;
        }
        Ok(ResultsWriter { csv: csv::Writer::from_writer(sink) })
    }

    pub fn row<I, T>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        self.csv.write_record(fields)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.csv.flush().map_err(|e| CliError::io("writing results", e))
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(v: f64) -> String {
    if v == 0.0 || (1e-5..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn rng_meta() -> (&'static str, String) {
    ("rng", RNG_ALGORITHM.to_string())
}

/// One metadata entry per component, e.g. `a Gaussian: 1*N(0, 1^2)`.
pub fn density_meta(d: &BenchmarkDensity) -> (&'static str, String) {
    let body = match d.form() {
        DensityForm::Uniform { lo, hi } => format!("U({lo}, {hi})"),
        DensityForm::Mixture(m) => m
            .weights()
            .iter()
            .zip(m.means())
            .zip(m.sds())
            .map(|((w, mu), s)| format!("{w}*N({mu}, {s}^2)"))
            .collect::<Vec<_>>()
            .join(" + "),
    };
    ("density", format!("{} {}: {body}", d.label(), d.name()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, 0.25, -3.5, 1e-300, 2.5e-7, 123456.789, 1e20, f64::MIN_POSITIVE, 0.1 + 0.2] {
            assert_eq!(num(v).parse::<f64>().unwrap().to_bits(), v.to_bits(), "{}", num(v));
        }
        assert_eq!(num(0.25), "0.25");
        assert_eq!(num(1e-300), "1e-300");
    }
}
