//! Explicit point files for the oracle:
//!
//! ```json
//! {"points": [{"x": [0], "y": ["1/2"]}, {"x": [1], "y": [3]}]}
//! ```
//!
//! Each coordinate vector has one entry per basis element; entries are
//! integers or `"p/q"` strings.

use std::path::Path;

use gapgrid::incidence::RatPoint;
use gapgrid::json::parse_rational;
use gapgrid::RatElement;
use serde_json::Value;

use crate::{Failure, EXIT_SPEC};

fn element(v: &Value, n: usize) -> Result<RatElement, String> {
    let items = v.as_array().ok_or("coordinate must be an array")?;
    if items.len() != n {
        return Err(format!("expected {n} coordinates, found {}", items.len()));
    }
    items
        .iter()
        .map(|c| {
            let text = match c {
                Value::Number(num) if num.is_i64() || num.is_u64() => num.to_string(),
                Value::String(s) => s.clone(),
                other => return Err(format!("not an exact number: {other}")),
            };
            parse_rational(&text).ok_or(format!("not an exact number: {text:?}"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(RatElement::new)
}

pub fn parse_points(text: &str, n: usize) -> Result<Vec<RatPoint>, String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let list = doc["points"].as_array().ok_or("missing \"points\" array")?;
    list.iter()
        .enumerate()
        .map(|(i, p)| {
            let x = element(&p["x"], n).map_err(|e| format!("point {i}: x: {e}"))?;
            let y = element(&p["y"], n).map_err(|e| format!("point {i}: y: {e}"))?;
            Ok(RatPoint::new(x, y))
        })
        .collect()
}

pub fn read_points(path: &Path, n: usize) -> Result<Vec<RatPoint>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_SPEC, format!("cannot read points {}: {e}", path.display())))?;
    parse_points(&text, n).map_err(|e| Failure::new(EXIT_SPEC, format!("malformed points file: {e}")))
}
