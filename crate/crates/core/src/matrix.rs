//! Dense exact vectors and matrices, row reduction and rank factorization.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num::traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::scalar::Scalar;

/// A column vector of the ambient space.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vector<S> {
    entries: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn new(entries: Vec<S>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![S::zero(); dim])
    }

    /// The `i`-th standard basis vector `e_i` (zero-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[i] = S::one();
        v
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| S::from_i64(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<S> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.entries.iter().map(Scalar::conj).collect())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.entries.iter().map(|v| v.clone() * c).collect())
    }

    /// `⟨self, other⟩ = Σ selfᵢ · conj(otherᵢ)`, linear in the first slot.
    pub fn inner(&self, other: &Self) -> S {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(S::zero(), |acc, (a, b)| acc + &(a.clone() * &b.conj()))
    }
}

impl<S: Scalar> Index<usize> for Vector<S> {
    type Output = S;

    fn index(&self, i: usize) -> &S {
        &self.entries[i]
    }
}

impl<S: Scalar> IndexMut<usize> for Vector<S> {
    fn index_mut(&mut self, i: usize) -> &mut S {
        &mut self.entries[i]
    }
}

impl<S: Scalar> Add for &Vector<S> {
    type Output = Vector<S>;

    fn add(self, rhs: Self) -> Vector<S> {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector::new(
            self.entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        )
    }
}

impl<S: Scalar> Sub for &Vector<S> {
    type Output = Vector<S>;

    fn sub(self, rhs: Self) -> Vector<S> {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector::new(
            self.entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() - b)
                .collect(),
        )
    }
}

impl<S: Scalar> fmt::Display for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// A dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Result of a reduced row echelon computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<S> {
    pub reduced: Matrix<S>,
    pub pivots: Vec<usize>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Matrix unit `E_{ij}` (one-based indices, as usually written).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i - 1, j - 1)] = S::one();
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        check_dim(rows * cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a list of equal-length rows. `cols` fixes the
    /// width when `rows` is empty.
    pub fn from_rows(cols: usize, rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            check_dim(cols, r.len())?;
            data.extend(r);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| S::from_i64(v)).collect())
            .collect();
        Self::from_rows(cols, rows).expect("ragged integer matrix")
    }

    pub fn from_row_vectors(cols: usize, rows: &[Vector<S>]) -> Result<Self> {
        Self::from_rows(cols, rows.iter().map(|v| v.entries().to_vec()).collect())
    }

    pub fn from_columns(rows: usize, cols: &[Vector<S>]) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            check_dim(rows, c.dim())?;
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vector<S> {
        Vector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_slice(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector<S> {
        Vector::new((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<Vector<S>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn columns(&self) -> Vec<Vector<S>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row_slice(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::conj).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.clone() * c).collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        check_dim(self.cols, rhs.rows)?;
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = std::mem::replace(&mut out[(i, j)], S::zero());
                    out[(i, j)] = cur + &(a.clone() * b);
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.clone() + b)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.clone() - b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        check_dim(self.rows, rhs.rows)?;
        check_dim(self.cols, rhs.cols)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn apply(&self, x: &Vector<S>) -> Result<Vector<S>> {
        check_dim(self.cols, x.dim())?;
        Ok(Vector::new(
            (0..self.rows)
                .map(|i| {
                    self.row_slice(i)
                        .iter()
                        .zip(x.entries())
                        .fold(S::zero(), |acc, (a, b)| acc + &(a.clone() * b))
                })
                .collect(),
        ))
    }

    /// Stacks `self` on top of `other`.
    pub fn stack(&self, other: &Self) -> Result<Self> {
        check_dim(self.cols, other.cols)?;
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Row-major flattening into a vector of length `rows·cols`.
    pub fn vectorize(&self) -> Vector<S> {
        Vector::new(self.data.clone())
    }

    pub fn unvectorize(rows: usize, cols: usize, v: &Vector<S>) -> Result<Self> {
        Self::from_vec(rows, cols, v.entries().to_vec())
    }

    /// Gauss-Jordan elimination to reduced row echelon form.
    pub fn rref(&self) -> Rref<S> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = S::one() / &m[(lead, col)];
            for j in col..m.cols {
                let v = std::mem::replace(&mut m[(lead, j)], S::zero());
                m[(lead, j)] = v * &inv;
            }
            for r in 0..m.rows {
                if r == lead || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for j in col..m.cols {
                    if m[(lead, j)].is_zero() {
                        continue;
                    }
                    let delta = factor.clone() * &m[(lead, j)];
                    let v = std::mem::replace(&mut m[(r, j)], S::zero());
                    m[(r, j)] = v - &delta;
                }
            }
            pivots.push(col);
            lead += 1;
        }
        Rref { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Writes the matrix as `Σ outer(xᵢ, yᵢ)` with exactly `rank` terms.
    ///
    /// Uses `M = C·R`, where `C` holds the pivot columns of `M` and `R` the
    /// nonzero rows of its reduced echelon form.
    pub fn rank_factorize(&self) -> Vec<(Vector<S>, Vector<S>)> {
        let Rref { reduced, pivots } = self.rref();
        pivots
            .iter()
            .enumerate()
            .map(|(i, &p)| (self.column(p), reduced.row(i).conj()))
            .collect()
    }

    /// Basis of `{z : Mz = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vector<S>> {
        let Rref { reduced, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = Vector::zeros(self.cols);
                v[f] = S::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = S::one();
        }
        let Rref { reduced, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = reduced[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }
}

/// The rank-one operator `z ↦ ⟨z, y⟩x`, i.e. the matrix `x·y*`.
pub fn outer<S: Scalar>(x: &Vector<S>, y: &Vector<S>) -> Matrix<S> {
    let mut m = Matrix::zeros(x.dim(), y.dim());
    for i in 0..x.dim() {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..y.dim() {
            m[(i, j)] = x[i].clone() * &y[j].conj();
        }
    }
    m
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    fn mul(self, rhs: Self) -> Matrix<S> {
        self.checked_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;

    fn add(self, rhs: Self) -> Matrix<S> {
        self.checked_add(rhs).expect("matrix sum dimension mismatch")
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;

    fn sub(self, rhs: Self) -> Matrix<S> {
        self.checked_sub(rhs).expect("matrix difference dimension mismatch")
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row_slice(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{t1, t2};
    use crate::scalar::GaussianRational;
    use num::BigRational;

    type M = Matrix<BigRational>;
    type V = Vector<BigRational>;

    #[test]
    fn rref_identity_and_zero() {
        let id = M::identity(3);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);

        let z = M::zeros(2, 2);
        let r = z.rref();
        assert_eq!(r.reduced, z);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_of_t1_has_two_pivots() {
        let r = t1::<BigRational>().rref();
        assert_eq!(r.pivots, vec![1, 2]);
        let expected = M::from_i64(&[&[0, 1, 0, 1], &[0, 0, 1, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        assert_eq!(r.reduced, expected);
    }

    #[test]
    fn ranks_of_published_operators() {
        assert_eq!(t1::<BigRational>().rank(), 2);
        assert_eq!(t2::<BigRational>().rank(), 3);
        assert_eq!(M::zeros(4, 4).rank(), 0);
    }

    #[test]
    fn rank_factorize_reconstructs() {
        let e12 = M::unit(4, 1, 2);
        let terms = e12.rank_factorize();
        assert_eq!(terms, vec![(V::basis(4, 0), V::basis(4, 1))]);

        let t = t1::<BigRational>();
        let terms = t.rank_factorize();
        assert_eq!(terms.len(), 2);
        let sum = terms
            .iter()
            .fold(M::zeros(4, 4), |acc, (x, y)| &acc + &outer(x, y));
        assert_eq!(sum, t);

        assert!(M::zeros(3, 3).rank_factorize().is_empty());
    }

    #[test]
    fn rank_factorize_gaussian() {
        type G = GaussianRational;
        let i = G::i();
        let one = G::from_i64(1);
        let t = Matrix::from_rows(
            2,
            vec![vec![one.clone(), i.clone()], vec![i.clone(), -one.clone()]],
        )
        .unwrap();
        assert_eq!(t.rank(), 1);
        let terms = t.rank_factorize();
        let sum = terms
            .iter()
            .fold(Matrix::zeros(2, 2), |acc, (x, y)| &acc + &outer(x, y));
        assert_eq!(sum, t);
    }

    #[test]
    fn outer_examples() {
        assert_eq!(outer(&V::basis(2, 0), &V::basis(2, 1)), M::unit(2, 1, 2));
        assert!(outer(&V::zeros(2), &V::from_i64(&[3, 4])).is_zero());
        let m = outer(&V::from_i64(&[1, 1]), &V::from_i64(&[1, -1]));
        assert_eq!(m, M::from_i64(&[&[1, -1], &[1, -1]]));
        // z ↦ ⟨z, y⟩x on the standard basis
        let (x, y) = (V::from_i64(&[1, 1]), V::from_i64(&[1, -1]));
        for k in 0..2 {
            let z = V::basis(2, k);
            assert_eq!(m.apply(&z).unwrap(), x.scale(&z.inner(&y)));
        }
    }

    #[test]
    fn outer_is_conjugate_linear_in_y() {
        type G = GaussianRational;
        let x = Vector::new(vec![G::from_i64(1), G::i()]);
        let y = Vector::new(vec![G::i(), G::from_i64(2)]);
        let z = Vector::new(vec![G::from_i64(3), G::from_i64(-1)]);
        let m = outer(&x, &y);
        assert_eq!(m.apply(&z).unwrap(), x.scale(&z.inner(&y)));
        let iy = y.scale(&G::i());
        assert_eq!(outer(&x, &iy), m.scale(&G::i().conj()));
    }

    #[test]
    fn inverse_and_singular() {
        let m = M::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, M::identity(2));
        assert_eq!(M::from_i64(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn commutator_examples() {
        let e12 = M::unit(2, 1, 2);
        let e22 = M::unit(2, 2, 2);
        assert_eq!(e12.commutator(&e22).unwrap(), e12);
        assert!(e12.commutator(&e12).unwrap().is_zero());
        assert!(M::identity(2).commutator(&e22).unwrap().is_zero());
    }
}
