//! CSV/JSON emission with a stable schema: header row, fixed column order,
//! 12 significant digits.

use std::io::Write;
use std::path::Path;

use crate::AppError;

/// `{:.11e}` carries one leading digit plus eleven fractional digits.
pub fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<(), AppError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(file, "{}", header.join(","))?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let line: Vec<String> = row.iter().map(|&x| fmt(x)).collect();
        writeln!(file, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), AppError> {
    std::fs::write(path, format!("{}\n", serde_json::to_string_pretty(value)?))?;
    Ok(())
}

impl From<serde_json::Error> for AppError {
    fn from(e: serde_json::Error) -> Self {
        AppError::Numerical(format!("json: {e}"))
    }
}
