//! Small named instances used throughout the tests and the CLI examples.

use crate::lattice::Nest;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Rank-2 operator on a 4-dimensional space whose kernel set relative to
/// the coordinate nest has three elements.
pub fn t1<S: Scalar>() -> Matrix<S> {
    Matrix::from_i64(&[&[0, 1, 0, 1], &[0, 0, 1, 1], &[0, 0, 1, 1], &[0, 0, 1, 1]])
}

/// Rank-3 operator with the same kernel set as [`t1`].
pub fn t2<S: Scalar>() -> Matrix<S> {
    Matrix::from_i64(&[&[0, 1, 0, 1], &[0, 0, 1, 1], &[0, 0, 1, 2], &[0, 0, 1, 1]])
}

/// The maximal coordinate nest `0 < span{e1} < … < span{e1..en}`.
pub fn full_coordinate_nest<S: Scalar>(n: usize) -> Nest<S> {
    let dims: Vec<usize> = (0..=n).collect();
    Nest::coordinate(n, &dims).expect("maximal coordinate chain is a nest")
}
