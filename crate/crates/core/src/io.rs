//! JSON matrix interchange: `{"dim": d, "re": [[..]], "im": [[..]], "dims": [dA, dB]}`.
//! `dims` is optional; when absent a 4×4 matrix is read as two qubits and a
//! 9×9 matrix as two qutrits.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{QError, Result};
use crate::linalg::{c, CMatrix};
use crate::state::{BipartiteState, DensityMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<[usize; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let rows = |f: fn(&crate::C64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        MatrixJson {
            dim: m.nrows(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
            dims: None,
        }
    }

    pub fn with_dims(mut self, da: usize, db: usize) -> Self {
        self.dims = Some([da, db]);
        self
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let d = self.dim;
        if d == 0 {
            return Err(QError::InvalidParameter(
                "matrix dimension must be positive".into(),
            ));
        }
        for (name, part) in [("re", &self.re), ("im", &self.im)] {
            if part.len() != d {
                return Err(QError::NotSquare {
                    rows: part.len(),
                    cols: d,
                });
            }
            if let Some(row) = part.iter().find(|row| row.len() != d) {
                return Err(QError::NotSquare {
                    rows: d,
                    cols: row.len(),
                });
            }
            if part.iter().flatten().any(|x| !x.is_finite()) {
                return Err(QError::InvalidParameter(format!(
                    "non-finite entry in \"{name}\""
                )));
            }
        }
        Ok(CMatrix::from_fn(d, d, |i, j| {
            c(self.re[i][j], self.im[i][j])
        }))
    }

    /// Subsystem dimensions, explicit or inferred.
    pub fn bipartition(&self) -> Result<(usize, usize)> {
        match self.dims {
            Some([da, db]) if da * db == self.dim => Ok((da, db)),
            Some([da, db]) => Err(QError::DimensionMismatch {
                expected: self.dim,
                got: da * db,
            }),
            None => match self.dim {
                4 => Ok((2, 2)),
                9 => Ok((3, 3)),
                d => Err(QError::InvalidParameter(format!(
                    "cannot infer subsystem dimensions for a {d}×{d} matrix; give \"dims\""
                ))),
            },
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_matrix()?)
    }

    pub fn to_bipartite(&self) -> Result<BipartiteState> {
        let (da, db) = self.bipartition()?;
        BipartiteState::from_matrix(self.to_matrix()?, da, db)
    }
}

impl From<&BipartiteState> for MatrixJson {
    fn from(s: &BipartiteState) -> Self {
        MatrixJson::from_matrix(s.matrix()).with_dims(s.dim_a(), s.dim_b())
    }
}

pub fn serialize_matrix<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    MatrixJson::from_matrix(m).serialize(s)
}

pub fn serialize_matrices<S: Serializer>(
    ms: &[CMatrix],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ms.iter().map(MatrixJson::from_matrix))
}

pub fn serialize_states<S: Serializer>(
    ms: &[DensityMatrix],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ms.iter().map(|m| MatrixJson::from_matrix(m.matrix())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    #[test]
    fn roundtrip_and_inference() {
        let m = linalg::kron(&linalg::pauli_y(), &linalg::identity(2));
        let j = MatrixJson::from_matrix(&m);
        assert_eq!(j.to_matrix().unwrap(), m);
        assert_eq!(j.bipartition().unwrap(), (2, 2));
        assert!(MatrixJson::from_matrix(&linalg::identity(6))
            .bipartition()
            .is_err());
        assert_eq!(
            MatrixJson::from_matrix(&linalg::identity(6))
                .with_dims(2, 3)
                .bipartition()
                .unwrap(),
            (2, 3)
        );
    }

    #[test]
    fn ragged_rows_rejected() {
        let mut j = MatrixJson::from_matrix(&linalg::identity(2));
        j.im[1].pop();
        assert!(matches!(j.to_matrix(), Err(QError::NotSquare { .. })));
    }
}
