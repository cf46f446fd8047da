//! Plain-text numeric input: one value per line, `#` comments, LF or CRLF.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

fn parse_lines<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = line
            .parse::<T>()
            .map_err(|_| CliError::Usage(format!("line {}: cannot parse {line:?} as {what}", i + 1)))?;
        out.push(v);
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_values(text: &str) -> Result<Vec<f64>, CliError> {
    let values: Vec<f64> = parse_lines(text, "a number")?;
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(CliError::Usage(format!("non-finite value {bad} in data")));
    }
    if values.len() < 2 {
        return Err(CliError::Usage(format!("need at least 2 values, found {}", values.len())));
    }
    Ok(values)
}

pub fn read_values(path: &Path) -> Result<Vec<f64>, CliError> {
    parse_values(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn read_counts(path: &Path) -> Result<Vec<u64>, CliError> {
    parse_lines(&read(path)?, "a non-negative integer")
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}
