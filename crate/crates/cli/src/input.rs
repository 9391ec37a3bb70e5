//! Sample files: one real per line, blank lines and `#` comments ignored.

use std::io::Read;

use crate::error::CliError;

pub fn parse_samples(text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let x: f64 = line
            .parse()
            .map_err(|_| CliError::Data(format!("line {}: not a number: '{line}'", n + 1)))?;
        if !x.is_finite() {
            return Err(CliError::Data(format!(
                "line {}: non-finite value '{line}'",
                n + 1
            )));
        }
        out.push(x);
    }
    if out.is_empty() {
        return Err(CliError::Data("input holds no samples".into()));
    }
    Ok(out)
}

/// Reads `path`, or standard input when `path` is `-`.
pub fn read_samples(path: &str) -> Result<Vec<f64>, CliError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{path}: {e}")))?
    };
    parse_samples(&text)
}
