use std::fs::File;
use std::path::Path;

use crate::error::{CliError, Result};

/// Reads one number per line, or a single-column CSV whose first row may be
/// a header. Blank lines and `#` comments are skipped.
pub fn read_sample(path: &Path) -> Result<Vec<f64>> {
    let file = File::open(path).map_err(|e| CliError::io(format!("cannot read {}", path.display()), e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(file);
    let mut values = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => CliError::Csv(e),
            _ => CliError::Data(format!("{}: {e}", path.display())),
        })?;
        let line = record.position().map_or(row as u64 + 1, |p| p.line());
        if record.len() != 1 {
            return Err(CliError::Data(format!(
                "{} line {line}: expected a single column, found {}",
                path.display(),
                record.len()
            )));
        }
        let field = &record[0];
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(v) => {
                return Err(CliError::Data(format!("{} line {line}: non-finite value {v}", path.display())));
            }
            Err(_) if row == 0 => {}
            Err(_) => {
                return Err(CliError::Data(format!("{} line {line}: not a number: {field:?}", path.display())));
            }
        }
    }
    if values.is_empty() {
        return Err(CliError::Data(format!("{}: no data values", path.display())));
    }
    Ok(values)
}
