//! JSON document shapes for algebras, modules and module maps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linfield::{Mat, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub field: u32,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub relations: Vec<Vec<TermSpec>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// One term `coeff * path` of a relation; the path lists arrows in the order
/// they are traversed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: i64,
    pub path: Vec<String>,
}

/// A module as a representation: one dimension per vertex and one matrix per
/// arrow (in the algebra's arrow order), each matrix row-major with
/// `dim(target)` rows and `dim(source)` columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<Vec<u8>>>,
}

/// A module map: one block per vertex, `dim(codomain) x dim(domain)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub blocks: Vec<Vec<Vec<u8>>>,
}

pub fn mat_to_rows(m: &Mat) -> Vec<Vec<u8>> {
    m.to_rows()
}

/// Reads a `rows x cols` matrix from nested arrays. A matrix with zero rows
/// is written as `[]` regardless of its column count.
pub fn mat_from_rows(field: PrimeField, rows: usize, cols: usize, data: &[Vec<u8>]) -> Result<Mat> {
    if data.len() != rows {
        return Err(Error::Malformed(format!("expected {rows} rows, found {}", data.len())));
    }
    let mut flat = Vec::with_capacity(rows * cols);
    for (i, row) in data.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Malformed(format!("row {i} has {} entries, expected {cols}", row.len())));
        }
        flat.extend_from_slice(row);
    }
    Mat::from_vec(field, rows, cols, flat)
}
