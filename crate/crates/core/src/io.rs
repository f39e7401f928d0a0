//! JSON formats for scalars, matrices, subspaces and lattices.
//!
//! Scalars travel as strings (`"3/4"`, `"1/2-2i"`), matrices as arrays of
//! rows of such strings. Lattices and nests use a tagged object:
//!
//! ```json
//! {"type": "coordinate", "dims": [1, 2, 4]}
//! {"type": "explicit", "subspaces": [[["1", "1", "0"]], [["1", "0", "0"], ["0", "1", "0"]]]}
//! ```
//!
//! For coordinate lattices the largest entry of `dims` is the ambient
//! dimension; `0` is implied.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::BilatticePair;
use crate::lattice::{Nest, SubspaceLattice};
use crate::matrix::{Matrix, Vector};
use crate::scalar::Scalar;
use crate::subspace::Subspace;

pub type RawMatrix = Vec<Vec<String>>;

pub fn parse_vector<S: Scalar>(raw: &[String]) -> Result<Vector<S>> {
    Ok(Vector::new(raw.iter().map(|s| S::parse(s)).collect::<Result<_>>()?))
}

pub fn parse_rows<S: Scalar>(raw: &[Vec<String>], cols: usize) -> Result<Matrix<S>> {
    let rows = raw
        .iter()
        .map(|r| {
            if r.len() != cols {
                return Err(Error::Malformed(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            r.iter().map(|s| S::parse(s)).collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(cols, rows)
}

pub fn parse_matrix<S: Scalar>(raw: &[Vec<String>]) -> Result<Matrix<S>> {
    let cols = raw
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::Malformed("empty matrix".into()))?;
    if cols == 0 {
        return Err(Error::Malformed("matrix with empty rows".into()));
    }
    parse_rows(raw, cols)
}

pub fn format_vector<S: Scalar>(v: &Vector<S>) -> Vec<String> {
    v.entries().iter().map(ToString::to_string).collect()
}

pub fn format_matrix<S: Scalar>(m: &Matrix<S>) -> RawMatrix {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum LatticeSpec {
    Coordinate { dims: Vec<usize> },
    Explicit { subspaces: Vec<RawMatrix> },
}

impl LatticeSpec {
    pub fn ambient_dim(&self) -> Result<usize> {
        match self {
            LatticeSpec::Coordinate { dims } => dims
                .iter()
                .copied()
                .max()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::Malformed("coordinate lattice needs a positive dimension".into())),
            LatticeSpec::Explicit { subspaces } => subspaces
                .iter()
                .flatten()
                .map(Vec::len)
                .next()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::Malformed("explicit lattice needs at least one basis row".into())),
        }
    }

    pub fn subspaces<S: Scalar>(&self) -> Result<Vec<Subspace<S>>> {
        let n = self.ambient_dim()?;
        match self {
            LatticeSpec::Coordinate { dims } => {
                Ok(dims.iter().map(|&d| Subspace::coordinate(n, 0..d)).collect())
            }
            LatticeSpec::Explicit { subspaces } => subspaces
                .iter()
                .map(|rows| Ok(Subspace::row_space(&parse_rows(rows, n)?)))
                .collect(),
        }
    }

    pub fn to_lattice<S: Scalar>(&self) -> Result<SubspaceLattice<S>> {
        SubspaceLattice::new(self.ambient_dim()?, self.subspaces()?)
    }

    pub fn to_nest<S: Scalar>(&self) -> Result<Nest<S>> {
        Nest::new(self.ambient_dim()?, self.subspaces()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceJson {
    pub dim: usize,
    pub basis: RawMatrix,
}

impl<S: Scalar> From<&Subspace<S>> for SubspaceJson {
    fn from(s: &Subspace<S>) -> Self {
        Self {
            dim: s.dim(),
            basis: format_matrix(s.basis()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairJson {
    pub p: SubspaceJson,
    pub q: SubspaceJson,
}

impl<S: Scalar> From<&BilatticePair<S>> for PairJson {
    fn from(pair: &BilatticePair<S>) -> Self {
        Self {
            p: (&pair.p).into(),
            q: (&pair.q).into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;
    use num::BigRational;

    fn raw(rows: &[&[&str]]) -> RawMatrix {
        rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
    }

    #[test]
    fn matrix_round_trip() {
        let m: Matrix<BigRational> = parse_matrix(&raw(&[&["1", "-1/2"], &["0", "3/4"]])).unwrap();
        assert_eq!(format_matrix(&m), raw(&[&["1", "-1/2"], &["0", "3/4"]]));
        let g: Matrix<GaussianRational> = parse_matrix(&raw(&[&["1/2+-3/4i", "i"]])).unwrap();
        assert_eq!(parse_matrix::<GaussianRational>(&format_matrix(&g)).unwrap(), g);
        assert!(parse_matrix::<BigRational>(&raw(&[&["i"]])).is_err());
        assert!(parse_matrix::<BigRational>(&raw(&[&["1", "2"], &["3"]])).is_err());
        assert!(parse_matrix::<BigRational>(&[]).is_err());
    }

    #[test]
    fn lattice_formats() {
        let spec: LatticeSpec = serde_json::from_str(r#"{"type":"coordinate","dims":[1,2,3,4]}"#).unwrap();
        let nest = spec.to_nest::<BigRational>().unwrap();
        assert_eq!(nest.ambient_dim(), 4);
        assert_eq!(nest.len(), 5);

        let spec: LatticeSpec = serde_json::from_str(
            r#"{"type":"explicit","subspaces":[[["1","0","0"]],[["0","1","0"]],[["1","1","0"]],[["1","0","0"],["0","1","0"]]]}"#,
        )
        .unwrap();
        let l = spec.to_lattice::<BigRational>().unwrap();
        assert_eq!(l.len(), 6);
        assert!(spec.to_nest::<BigRational>().is_err());
        let open: LatticeSpec =
            serde_json::from_str(r#"{"type":"explicit","subspaces":[[["1","0","0"]],[["0","1","0"]]]}"#).unwrap();
        assert!(open.to_lattice::<BigRational>().is_err());

        assert!(serde_json::from_str::<LatticeSpec>(r#"{"type":"other"}"#).is_err());
        let bad: LatticeSpec = serde_json::from_str(r#"{"type":"explicit","subspaces":[[]]}"#).unwrap();
        assert!(bad.to_lattice::<BigRational>().is_err());
    }
}
