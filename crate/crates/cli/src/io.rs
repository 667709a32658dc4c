use std::fs;
use std::path::Path;

use realqm_core::{RealMatrix, RealVector};
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<RealMatrix, CliError> {
    serde_json::from_value(read_json(path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// A state file is either a bare JSON array or a single-row/column matrix
/// object.
pub fn read_vector(path: &Path) -> Result<RealVector, CliError> {
    let value = read_json(path)?;
    let parse_err = |e: String| CliError::Parse(format!("{}: {e}", path.display()));
    let components: Vec<f64> = if value.is_array() {
        serde_json::from_value(value).map_err(|e| parse_err(e.to_string()))?
    } else {
        let m: RealMatrix = serde_json::from_value(value).map_err(|e| parse_err(e.to_string()))?;
        if m.rows() != 1 && m.cols() != 1 {
            return Err(parse_err(format!(
                "state must be a row or column, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        m.as_slice().to_vec()
    };
    RealVector::new(components).map_err(|e| parse_err(e.to_string()))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    write_text(path, &to_json(value))
}
