//! Shared JSON encoding of complex matrices.
//!
//! A matrix is a row-major array of rows, each row an array of `[re, im]`
//! pairs: `[[[1.0, 0.0], [0.0, 0.5]], [[0.0, -0.5], [2.0, 0.0]]]`. A `0×k`
//! matrix cannot carry its column count and is written as `[]`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{c64, CMatrix};

pub type MatrixRepr = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_repr(m: &CMatrix) -> MatrixRepr {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn repr_to_matrix(rows: &MatrixRepr) -> Result<CMatrix, String> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err("ragged matrix rows".into());
    }
    let mut m = CMatrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(format!("non-finite entry at ({i}, {j})"));
            }
            m[(i, j)] = c64(re, im);
        }
    }
    Ok(m)
}

/// Shortest round-trip decimal form of `x` (at most 17 significant digits),
/// switching to exponent notation for very large or small magnitudes.
pub fn fmt_num(x: f64) -> String {
    format!("{x:?}")
}

/// `#[serde(with = "crate::json::matrix")]` for a single `CMatrix` field.
pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        matrix_to_repr(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        repr_to_matrix(&repr).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "crate::json::matrices")]` for a `Vec<CMatrix>` field.
pub mod matrices {
    use super::*;

    pub fn serialize<S: Serializer>(ms: &[CMatrix], s: S) -> Result<S::Ok, S::Error> {
        ms.iter().map(matrix_to_repr).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CMatrix>, D::Error> {
        let reprs = Vec::<MatrixRepr>::deserialize(d)?;
        reprs
            .iter()
            .map(|r| repr_to_matrix(r).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repr_round_trip() {
        let m = CMatrix::from_row_slice(2, 3, &[
            c64(1.0, 0.0), c64(0.0, 0.5), c64(-1.5, 2.0),
            c64(0.25, -0.75), c64(3.0, 0.0), c64(0.0, 0.0),
        ]);
        let back = repr_to_matrix(&matrix_to_repr(&m)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn ragged_rejected() {
        let repr: MatrixRepr = vec![vec![[1.0, 0.0]], vec![]];
        assert!(repr_to_matrix(&repr).is_err());
    }
}
