//! Point and line tables for external plotting tools.
//!
//! Output depends only on the construction, so repeated runs are
//! byte-identical.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::construction::{json_coords, LineFamily, PointGrid};
use crate::numberfield::{IntElement, StructureTable};

pub const DEFAULT_EXPORT_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Csv,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Json => "json",
            ExportFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("{what} table would have {rows} rows, above the export cap of {cap}")]
    CapExceeded { what: &'static str, rows: BigInt, cap: u64 },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn check_cap(what: &'static str, rows: BigInt, cap: u64) -> Result<(), ExportError> {
    if rows > BigInt::from(cap) {
        Err(ExportError::CapExceeded { what, rows, cap })
    } else {
        Ok(())
    }
}

fn header(prefixes: [&str; 2], n: usize, reals: [&str; 2]) -> String {
    let mut cols = Vec::new();
    for p in prefixes {
        cols.extend((1..=n).map(|i| format!("{p}{i}")));
    }
    cols.extend(reals.iter().map(|s| s.to_string()));
    cols.join(",")
}

fn csv_row(out: &mut String, a: &IntElement, b: &IntElement, ra: f64, rb: f64) {
    for c in a.coords().iter().chain(b.coords()) {
        let _ = write!(out, "{c},");
    }
    let _ = writeln!(out, "{ra:?},{rb:?}");
}

#[derive(Serialize)]
struct PointRecord {
    x: Vec<Value>,
    y: Vec<Value>,
    x_real: f64,
    y_real: f64,
}

#[derive(Serialize)]
struct LineRecord {
    slope: Vec<Value>,
    intercept: Vec<Value>,
    slope_real: f64,
    intercept_real: f64,
}

/// Columns `x1..xn, y1..yn, x_real, y_real`, x-major order.
pub fn export_points(grid: &PointGrid, format: ExportFormat, cap: u64) -> Result<String, ExportError> {
    check_cap("points", grid.point_count(), cap)?;
    let t: &StructureTable = &grid.table;
    match format {
        ExportFormat::Csv => {
            let mut out = header(["x", "y"], t.dim(), ["x_real", "y_real"]);
            out.push('\n');
            for (x, y) in grid.points() {
                csv_row(&mut out, &x, &y, t.embed(&x), t.embed(&y));
            }
            Ok(out)
        }
        ExportFormat::Json => {
            let rows: Vec<_> = grid
                .points()
                .map(|(x, y)| PointRecord {
                    x_real: t.embed(&x),
                    y_real: t.embed(&y),
                    x: json_coords(x.coords()),
                    y: json_coords(y.coords()),
                })
                .collect();
            Ok(serde_json::to_string_pretty(&rows)? + "\n")
        }
    }
}

/// Columns `m1..mn, b1..bn, slope_real, intercept_real`. `None` yields an
/// empty table.
pub fn export_lines(
    family: Option<&LineFamily>,
    table: &StructureTable,
    format: ExportFormat,
    cap: u64,
) -> Result<String, ExportError> {
    if let Some(f) = family {
        check_cap("lines", f.len(), cap)?;
    }
    let lines = family.into_iter().flat_map(|f| f.iter());
    match format {
        ExportFormat::Csv => {
            let mut out = header(["m", "b"], table.dim(), ["slope_real", "intercept_real"]);
            out.push('\n');
            for l in lines {
                csv_row(&mut out, &l.slope, &l.intercept, table.embed(&l.slope), table.embed(&l.intercept));
            }
            Ok(out)
        }
        ExportFormat::Json => {
            let rows: Vec<_> = lines
                .map(|l| LineRecord {
                    slope_real: table.embed(&l.slope),
                    intercept_real: table.embed(&l.intercept),
                    slope: json_coords(l.slope.coords()),
                    intercept: json_coords(l.intercept.coords()),
                })
                .collect();
            Ok(serde_json::to_string_pretty(&rows)? + "\n")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::derive_params;
    use crate::gap::GapBox;
    use crate::numberfield::BasisSpec;
    use std::sync::Arc;

    #[test]
    fn elekes_csv_row_counts() {
        let p = derive_params(&16.into(), &2.into(), BasisSpec::rational(), Arc::new(StructureTable::rational()))
            .unwrap();
        let pts = export_points(&p.grid(), ExportFormat::Csv, DEFAULT_EXPORT_CAP).unwrap();
        let lines = export_lines(Some(&p.lines()), &p.table, ExportFormat::Csv, DEFAULT_EXPORT_CAP).unwrap();
        assert_eq!(pts.lines().count(), 28);
        assert_eq!(lines.lines().count(), 26);
        assert_eq!(pts.lines().next(), Some("x1,y1,x_real,y_real"));
        assert_eq!(pts.lines().nth(1), Some("-1,-4,-1.0,-4.0"));
        assert_eq!(lines.lines().next(), Some("m1,b1,slope_real,intercept_real"));
    }

    #[test]
    fn integer_point_embeds_exactly() {
        let grid = PointGrid {
            table: Arc::new(StructureTable::rational()),
            x_box: GapBox::new(1, 3.into()),
            y_box: GapBox::new(1, 0.into()),
        };
        let csv = export_points(&grid, ExportFormat::Csv, 100).unwrap();
        assert_eq!(csv.lines().last(), Some("3,0,3.0,0.0"));
    }

    #[test]
    fn quadratic_embedding_in_json() {
        let t = Arc::new(BasisSpec::quadratic(2).build().unwrap());
        let grid = PointGrid { table: t, x_box: GapBox::new(2, 1.into()), y_box: GapBox::new(2, 0.into()) };
        let text = export_points(&grid, ExportFormat::Json, 100).unwrap();
        let rows: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
        assert_eq!(rows.len(), 9);
        let last = &rows[8];
        assert_eq!(last["x"], serde_json::json!([1, 1]));
        assert!((last["x_real"].as_f64().unwrap() - 2.414213562373095).abs() < 1e-9);
    }

    #[test]
    fn cap_is_enforced() {
        let grid = PointGrid {
            table: Arc::new(StructureTable::rational()),
            x_box: GapBox::new(1, 10.into()),
            y_box: GapBox::new(1, 10.into()),
        };
        assert!(matches!(
            export_points(&grid, ExportFormat::Csv, 100),
            Err(ExportError::CapExceeded { .. })
        ));
        assert!(export_points(&grid, ExportFormat::Csv, 441).is_ok());
    }

    #[test]
    fn no_family_gives_header_only() {
        let csv = export_lines(None, &StructureTable::rational(), ExportFormat::Csv, 10).unwrap();
        assert_eq!(csv, "m1,b1,slope_real,intercept_real\n");
        let json = export_lines(None, &StructureTable::rational(), ExportFormat::Json, 10).unwrap();
        assert_eq!(json, "[]\n");
    }
}
