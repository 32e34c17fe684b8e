//! Threshold-curve files and output destinations.

use std::fs;
use std::io::Write;
use std::path::Path;

use uavg_core::ft::ThresholdCurve;

use crate::error::{CliError, Result};

fn input_error(path: &Path, line: u64, message: impl Into<String>) -> CliError {
    CliError::Input { path: path.to_path_buf(), line, message: message.into() }
}

/// Reads a curve file from disk.
pub fn read_curve(path: &Path) -> Result<ThresholdCurve> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Unreadable { path: path.to_path_buf(), source })?;
    parse_curve(path, &text)
}

/// Parses `# code: <name>`, the `epsilon,gamma` header and one point per row.
/// Errors carry the 1-based line number of the offending line.
pub fn parse_curve(path: &Path, text: &str) -> Result<ThresholdCurve> {
    let mut name = None;
    for (i, line) in text.lines().enumerate() {
        if let Some(rest) = line.trim_start().strip_prefix('#') {
            if let Some(code) = rest.trim_start().strip_prefix("code:") {
                if name.is_some() {
                    return Err(input_error(path, i as u64 + 1, "second `# code:` line"));
                }
                let code = code.trim();
                if code.is_empty() {
                    return Err(input_error(path, i as u64 + 1, "empty code name"));
                }
                name = Some(code.to_string());
            }
        }
    }
    let name = name.ok_or_else(|| input_error(path, 1, "missing `# code: <name>` line"))?;

    let mut reader =
        csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).has_headers(true).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| input_error(path, 1, e.to_string()))?.clone();
    let header_line =
        text.lines().position(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#')).map_or(1, |i| i as u64 + 1);
    if headers.iter().collect::<Vec<_>>() != ["epsilon", "gamma"] {
        return Err(input_error(
            path,
            header_line,
            format!("expected header `epsilon,gamma`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        ));
    }

    let mut points: Vec<(f64, f64)> = Vec::new();
    let mut lines: Vec<u64> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            input_error(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(input_error(path, line, format!("expected 2 fields, found {}", record.len())));
        }
        let field = |k: usize, what: &str| -> Result<f64> {
            let raw = &record[k];
            match raw.parse::<f64>() {
                Ok(x) if x > 0.0 && x < 1.0 => Ok(x),
                Ok(x) => Err(input_error(path, line, format!("{what} {x} is outside (0, 1)"))),
                Err(_) => Err(input_error(path, line, format!("{what} `{raw}` is not a number"))),
            }
        };
        let p = (field(0, "epsilon")?, field(1, "gamma")?);
        if let Some(&(e0, g0)) = points.last() {
            if p.0 <= e0 {
                return Err(input_error(path, line, "epsilon must be strictly increasing"));
            }
            if p.1 > g0 {
                return Err(input_error(path, line, "gamma must not increase"));
            }
        }
        points.push(p);
        lines.push(line);
    }
    let last = lines.last().copied().unwrap_or(header_line);
    ThresholdCurve::new(name, points).map_err(|e| input_error(path, last, e.to_string()))
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Write { path: p.to_path_buf(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|source| CliError::Write { path: "<stdout>".into(), source })
        }
    }
}
