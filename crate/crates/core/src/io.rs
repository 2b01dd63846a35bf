//! Matrix and map-spec file formats.
//!
//! Matrices are read either as JSON, `{"rows": n, "cols": m, "data": [[...], ...]}`
//! (row-major array of rows), or as plain text: one row per line,
//! entries separated by whitespace. In plain text, blank lines and lines
//! starting with `#` are skipped. Entries must be finite decimal literals;
//! `nan` and `inf` are rejected. Input that starts with `{` is JSON.
//!
//! Plain-text output uses 17 significant digits, and JSON output uses the
//! shortest representation that parses back to the same `f64`; both
//! round-trip bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::matmap::MapSpec;

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    if text.trim_start().starts_with('{') {
        parse_matrix_json(text)
    } else {
        parse_matrix_text(text)
    }
}

fn json_error(e: &serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn parse_matrix_json(text: &str) -> Result<Matrix> {
    serde_json::from_str(text).map_err(|e| {
        if e.line() != 0 {
            return json_error(&e);
        }
        // Shape checks run after the object is read and carry no position;
        // point at the "data" key instead.
        let at = text.find("\"data\"").unwrap_or(0);
        let line = text[..at].matches('\n').count() + 1;
        let column = at - text[..at].rfind('\n').map_or(0, |k| k + 1) + 1;
        Error::Parse {
            line,
            column,
            message: e.to_string(),
        }
    })
}

pub fn parse_matrix_text(text: &str) -> Result<Matrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut first_line = 0;
    for (ln, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        let mut rest = line;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let tail = &rest[start..];
            let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
            let token = &tail[..len];
            let column = line[..offset + start].chars().count() + 1;
            let bad = |message: String| Error::Parse {
                line: ln + 1,
                column,
                message,
            };
            let value: f64 = token
                .parse()
                .map_err(|_| bad(format!("invalid number {token:?}")))?;
            if !value.is_finite() {
                return Err(bad(format!("non-finite entry {token:?}")));
            }
            row.push(value);
            offset += start + len;
            rest = &tail[len..];
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: ln + 1,
                    column: 1,
                    message: format!(
                        "row has {} entries but the row on line {} has {}",
                        row.len(),
                        first_line + 1,
                        first.len()
                    ),
                });
            }
        } else {
            first_line = ln;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no matrix rows found".into(),
        });
    }
    Matrix::try_from_rows(&rows)
}

pub fn write_matrix_text(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{x:.16e}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn write_matrix_json(m: &Matrix) -> String {
    serde_json::to_string(m).expect("matrix serializes")
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    parse_matrix(&read_to_string(path)?)
}

/// Parses a map spec; schema errors carry the JSON path of the offending node.
pub fn parse_map_spec(text: &str) -> Result<MapSpec> {
    let value: Value = serde_json::from_str(text).map_err(|e| json_error(&e))?;
    match MapSpec::deserialize(&value) {
        Ok(spec) => Ok(spec),
        Err(_) => {
            let (path, e) = locate_schema_error(&value, String::new());
            Err(Error::Schema {
                path: if path.is_empty() { ".".into() } else { path },
                message: e.to_string(),
            })
        }
    }
}

/// Internally tagged enums buffer their content, so serde reports errors
/// without a location. Descend to the deepest node that fails on its own.
fn locate_schema_error(v: &Value, path: String) -> (String, serde_json::Error) {
    let join = |key: &str| {
        if path.is_empty() {
            key.to_string()
        } else {
            format!("{path}.{key}")
        }
    };
    if let Some(obj) = v.as_object() {
        if let Some(Value::Array(maps)) = obj.get("maps") {
            for (i, m) in maps.iter().enumerate() {
                if MapSpec::deserialize(m).is_err() {
                    return locate_schema_error(m, format!("{}[{i}]", join("maps")));
                }
            }
        }
        if let Some(m) = obj.get("map") {
            if MapSpec::deserialize(m).is_err() {
                return locate_schema_error(m, join("map"));
            }
        }
        for key in ["left", "right", "a", "t", "s"] {
            if let Some(Err(e)) = obj.get(key).map(Matrix::deserialize) {
                return (join(key), e);
            }
        }
    }
    let e = MapSpec::deserialize(v).expect_err("caller saw this node fail");
    (path, e)
}

pub fn read_map_spec(path: &Path) -> Result<MapSpec> {
    parse_map_spec(&read_to_string(path)?)
}
