//! Approximate rank for large random experiments.
//!
//! Everything else in the crate is exact; this module only converts an exact
//! matrix to `Complex64` and decides rank by elimination with partial
//! pivoting, treating pivots below `tol · max|entry|` as zero.

use num_complex::Complex64;

use crate::matrix::Matrix;
use crate::scalar::Scalar;

pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-9;

pub fn to_complex<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<Complex64>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(Scalar::to_complex_f64).collect())
        .collect()
}

/// Numerical rank of a dense complex matrix with relative tolerance `tol`.
pub fn approx_rank(rows: &[Vec<Complex64>], tol: f64) -> usize {
    let mut a: Vec<Vec<Complex64>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let scale = a
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let threshold = tol * scale;
    let mut rank = 0;
    for c in 0..cols {
        if rank == a.len() {
            break;
        }
        let (best, norm) = (rank..a.len())
            .map(|r| (r, a[r][c].norm()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if norm <= threshold {
            continue;
        }
        a.swap(rank, best);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest {
            let f = row[c] / pivot_row[c];
            if f.norm() == 0.0 {
                continue;
            }
            for (dst, src) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *dst -= f * src;
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    approx_rank(&to_complex(m), DEFAULT_RANK_TOLERANCE)
}
