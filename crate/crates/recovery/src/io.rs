//! Single-column CSV signals and flat `key=value` configuration files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{RecoveryError, Result};

/// Parses one real per non-empty line; a non-numeric first line is taken
/// as a header.
pub fn parse_signal_csv(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let field = line.trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => {
                return Err(RecoveryError::Malformed {
                    line: n + 1,
                    message: format!("non-finite value {field:?}"),
                })
            }
            Err(_) if n == 0 && values.is_empty() => continue,
            Err(_) => {
                return Err(RecoveryError::Malformed {
                    line: n + 1,
                    message: format!("not a number: {field:?}"),
                })
            }
        }
    }
    if values.is_empty() {
        return Err(RecoveryError::Malformed {
            line: 0,
            message: "no values".into(),
        });
    }
    Ok(values)
}

pub fn read_signal_csv(path: &Path) -> Result<Vec<f64>> {
    parse_signal_csv(&std::fs::read_to_string(path)?)
}

pub fn format_signal_csv(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 12);
    for v in values {
        writeln!(out, "{v}").expect("writing to a String cannot fail");
    }
    out
}

pub fn write_signal_csv(path: &Path, values: &[f64]) -> Result<()> {
    Ok(std::fs::write(path, format_signal_csv(values))?)
}

/// `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(RecoveryError::Malformed {
                line: n + 1,
                message: format!("expected key=value, got {line:?}"),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(RecoveryError::Malformed {
                line: n + 1,
                message: "empty key".into(),
            });
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    parse_config(&std::fs::read_to_string(path)?)
}
