//! Helpers shared by the command-line tools.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Reads a point file: reals separated by commas, whitespace or newlines.
pub fn read_point(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut point = Vec::new();
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let v: f64 = tok
            .parse()
            .with_context(|| format!("{}: `{tok}` is not a number", path.display()))?;
        point.push(v);
    }
    if point.is_empty() {
        bail!("{}: no values", path.display());
    }
    Ok(point)
}

/// Formats a value with 17 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
