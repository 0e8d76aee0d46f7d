//! JSON basis specifications.
//!
//! ```json
//! {"kind":"power","min_poly":[-2,0,1],"alpha":1.4142135623730951}
//! {"kind":"table","n":1,"c":[[[1]]],"unity":[1],"embedding":[1.0]}
//! ```

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{FieldError, IntElement, MinimalPolynomial, StructureTable, ValidationReport};
use crate::json;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BasisSpec {
    Power {
        #[serde(with = "json::bigint_vec")]
        min_poly: Vec<BigInt>,
        alpha: f64,
    },
    Table {
        n: usize,
        #[serde(with = "json::bigint_cube")]
        c: Vec<Vec<Vec<BigInt>>>,
        #[serde(with = "json::bigint_vec")]
        unity: Vec<BigInt>,
        embedding: Vec<f64>,
    },
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read spec {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed spec: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid spec: {0}")]
    Field(#[from] FieldError),
    #[error("table spec declares n = {declared} but has {actual} planes")]
    DeclaredDimension { declared: usize, actual: usize },
    #[error("basis fails validation: {}", .0.failures().join(", "))]
    Validation(Box<ValidationReport>),
}

impl BasisSpec {
    pub fn rational() -> Self {
        BasisSpec::Power { min_poly: vec![BigInt::from(-1), BigInt::from(1)], alpha: 1.0 }
    }

    /// `x² − k` with the positive square root as embedding.
    pub fn quadratic(k: i64) -> Self {
        BasisSpec::Power {
            min_poly: vec![BigInt::from(-k), BigInt::from(0), BigInt::from(1)],
            alpha: (k as f64).sqrt(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| SpecError::Io { path: path.to_owned(), source })?;
        Self::from_json(&text)
    }

    /// Builds the table without running the niceness checks.
    pub fn build_unchecked(&self) -> Result<StructureTable, SpecError> {
        match self {
            BasisSpec::Power { min_poly, alpha } => {
                let p = MinimalPolynomial::new(min_poly.clone())?;
                Ok(StructureTable::power_basis(&p, *alpha)?)
            }
            BasisSpec::Table { n, c, unity, embedding } => {
                if c.len() != *n {
                    return Err(SpecError::DeclaredDimension { declared: *n, actual: c.len() });
                }
                Ok(StructureTable::from_parts(
                    c.clone(),
                    IntElement::new(unity.clone()),
                    embedding.clone(),
                )?)
            }
        }
    }

    /// Builds and validates; a table failing any check is rejected.
    pub fn build(&self) -> Result<StructureTable, SpecError> {
        let table = self.build_unchecked()?;
        let report = table.validate();
        if report.passed() {
            Ok(table)
        } else {
            Err(SpecError::Validation(Box::new(report)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_power_spec() {
        let spec = BasisSpec::from_json(r#"{"kind":"power","min_poly":[-2,0,1],"alpha":1.4142135623730951}"#)
            .unwrap();
        let t = spec.build().unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.c_lambda(), BigInt::from(2));
    }

    #[test]
    fn parses_table_spec() {
        let spec = BasisSpec::from_json(
            r#"{"kind":"table","n":1,"c":[[[1]]],"unity":[1],"embedding":[1.0]}"#,
        )
        .unwrap();
        assert_eq!(spec.build().unwrap(), StructureTable::rational());
    }

    #[test]
    fn rejects_asymmetric_table() {
        let spec = BasisSpec::from_json(
            r#"{"kind":"table","n":2,"c":[[[1,0],[0,1]],[[5,0],[2,0]]],"unity":[1,0],"embedding":[1.0,1.4142135623730951]}"#,
        )
        .unwrap();
        match spec.build() {
            Err(SpecError::Validation(r)) => assert!(!r.symmetry.passed),
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn rejects_wrong_declared_dimension() {
        let spec = BasisSpec::from_json(
            r#"{"kind":"table","n":2,"c":[[[1]]],"unity":[1],"embedding":[1.0]}"#,
        )
        .unwrap();
        assert!(matches!(spec.build(), Err(SpecError::DeclaredDimension { .. })));
    }

    #[test]
    fn rejects_missing_embedding_and_unknown_kind() {
        assert!(BasisSpec::from_json(r#"{"kind":"table","n":1,"c":[[[1]]],"unity":[1]}"#).is_err());
        assert!(BasisSpec::from_json(r#"{"kind":"galois","n":1}"#).is_err());
    }

    #[test]
    fn rejects_non_monic_power_spec() {
        let spec = BasisSpec::from_json(r#"{"kind":"power","min_poly":[-2,0,2],"alpha":1.0}"#).unwrap();
        assert!(matches!(spec.build(), Err(SpecError::Field(FieldError::NotMonic))));
    }

    #[test]
    fn round_trips_through_json() {
        let spec = BasisSpec::quadratic(3);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(BasisSpec::from_json(&text).unwrap(), spec);
    }
}
