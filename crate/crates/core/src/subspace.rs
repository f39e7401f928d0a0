//! Canonical subspaces and their projections.
//!
//! A subspace is stored as the nonzero rows of the reduced row echelon form
//! of any spanning set. That form is unique, so two subspaces are equal iff
//! their stored bases are identical.

use std::fmt;

use num::traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace<S> {
    ambient_dim: usize,
    basis: Matrix<S>,
    pivots: Vec<usize>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix<S>) -> Self {
        let rref = m.rref();
        let r = rref.pivots.len();
        let rows = (0..r).map(|i| rref.reduced.row_slice(i).to_vec()).collect();
        Self {
            ambient_dim: m.cols(),
            basis: Matrix::from_rows(m.cols(), rows).expect("rref rows have matrix width"),
            pivots: rref.pivots,
        }
    }

    pub fn span(ambient_dim: usize, vectors: &[Vector<S>]) -> Result<Self> {
        Ok(Self::row_space(&Matrix::from_row_vectors(ambient_dim, vectors)?))
    }

    /// Span of the standard basis vectors with the given zero-based indices.
    pub fn coordinate(ambient_dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let vs: Vec<_> = indices
            .into_iter()
            .map(|i| Vector::basis(ambient_dim, i))
            .collect();
        Self::span(ambient_dim, &vs).expect("basis vectors have ambient dimension")
    }

    /// Column space (range) of `m`.
    pub fn range(m: &Matrix<S>) -> Self {
        Self::row_space(&m.transpose())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector<S>> {
        self.basis.row_vectors()
    }

    /// Residual of `v` after elimination against the canonical basis; zero
    /// iff `v` lies in the subspace.
    fn residual(&self, v: &[S]) -> Vec<S> {
        let mut r = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if r[p].is_zero() {
                continue;
            }
            let c = r[p].clone();
            for (j, b) in self.basis.row_slice(i).iter().enumerate() {
                if !b.is_zero() {
                    let cur = std::mem::replace(&mut r[j], S::zero());
                    r[j] = cur - &(c.clone() * b);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &Vector<S>) -> bool {
        v.dim() == self.ambient_dim && self.residual(v.entries()).iter().all(Zero::is_zero)
    }

    /// Inclusion `self ≤ other`.
    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() <= other.dim()
            && (0..self.dim()).all(|i| {
                other
                    .residual(self.basis.row_slice(i))
                    .iter()
                    .all(Zero::is_zero)
            })
    }

    /// Strict inclusion `self < other`.
    pub fn is_proper_subspace_of(&self, other: &Self) -> bool {
        self.dim() < other.dim() && self.is_subspace_of(other)
    }

    /// `self ∨ other`: the span of both.
    pub fn join(&self, other: &Self) -> Result<Self> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        if self.is_subspace_of(other) {
            return Ok(other.clone());
        }
        if other.is_subspace_of(self) {
            return Ok(self.clone());
        }
        Ok(Self::row_space(&self.basis.stack(&other.basis)?))
    }

    /// `self ∧ other`: the intersection, as the common kernel of both
    /// orthogonality constraint systems.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        if self.is_subspace_of(other) {
            return Ok(self.clone());
        }
        if other.is_subspace_of(self) {
            return Ok(other.clone());
        }
        let constraints = self
            .complement()
            .basis
            .conj()
            .stack(&other.complement().basis.conj())?;
        Ok(Self::null_space(&constraints))
    }

    /// Orthogonal complement for `⟨x, y⟩ = Σ xᵢ conj(yᵢ)`.
    pub fn complement(&self) -> Self {
        if self.is_zero() {
            return Self::full(self.ambient_dim);
        }
        Self::null_space(&self.basis.conj())
    }

    /// Kernel of `m` as a subspace of its column space dimension.
    pub fn null_space(m: &Matrix<S>) -> Self {
        let ker = m.kernel_basis();
        Self::span(m.cols(), &ker).expect("kernel vectors have column dimension")
    }

    /// The orthogonal projection onto this subspace, `A(A*A)⁻¹A*` with the
    /// basis vectors as the columns of `A`.
    pub fn projector(&self) -> Matrix<S> {
        let n = self.ambient_dim;
        if self.is_zero() {
            return Matrix::zeros(n, n);
        }
        if self.is_full() {
            return Matrix::identity(n);
        }
        let a = self.basis.transpose();
        let a_star = self.basis.conj();
        let gram = &a_star * &a;
        let gram_inv = gram
            .inverse()
            .expect("Gram matrix of an independent family is invertible");
        &(&a * &gram_inv) * &a_star
    }

    /// Projector onto the orthogonal complement, `I − P`.
    pub fn complement_projector(&self) -> Matrix<S> {
        &Matrix::identity(self.ambient_dim) - &self.projector()
    }

    /// The subspace a projection matrix projects onto.
    pub fn of_projector(p: &Matrix<S>) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::NotSquare {
                rows: p.rows(),
                cols: p.cols(),
            });
        }
        Ok(Self::range(p))
    }

    /// `self ⊖ other`, the orthogonal complement of `other` inside `self`.
    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.meet(&other.complement())
    }
}

/// Checks `Q·T·P = 0` for the orthogonal projections onto `q` and `p`
/// without forming the projections: `⟨T p_i, q_j⟩ = 0` for all basis pairs.
pub fn annihilates<S: Scalar>(q: &Subspace<S>, t: &Matrix<S>, p: &Subspace<S>) -> bool {
    if q.is_zero() || p.is_zero() {
        return true;
    }
    let tp = t * &p.basis().transpose();
    let qtp = &q.basis().conj() * &tp;
    qtp.is_zero()
}

impl<S: Scalar> fmt::Display for Subspace<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("{0}");
        }
        f.write_str("span{")?;
        for (i, v) in self.basis_vectors().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::t1;
    use crate::scalar::GaussianRational;
    use num::BigRational;

    type Sub = Subspace<BigRational>;
    type V = Vector<BigRational>;
    type M = Matrix<BigRational>;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn null_space_examples() {
        assert!(Sub::null_space(&M::identity(3)).is_zero());
        assert!(Sub::null_space(&M::zeros(3, 3)).is_full());
        assert_eq!(Sub::null_space(&t1()).dim(), 2);
    }

    #[test]
    fn projector_examples() {
        let s = Sub::coordinate(2, [0]);
        assert_eq!(s.projector(), M::from_i64(&[&[1, 0], &[0, 0]]));
        assert_eq!(Sub::full(3).projector(), M::identity(3));

        let s = Sub::span(2, &[V::from_i64(&[1, 1])]).unwrap();
        let p = s.projector();
        let half = q(1, 2);
        let expected = M::from_rows(2, vec![vec![half.clone(), half.clone()], vec![half.clone(), half]]).unwrap();
        assert_eq!(p, expected);
        assert_eq!(&p * &p, p);
        assert_eq!(p.adjoint(), p);
        assert_eq!(Sub::of_projector(&p).unwrap(), s);
    }

    #[test]
    fn join_and_meet_examples() {
        let e1 = Sub::coordinate(3, [0]);
        let e2 = Sub::coordinate(3, [1]);
        assert_eq!(e1.join(&e2).unwrap(), Sub::coordinate(3, [0, 1]));
        assert_eq!(e1.join(&Sub::zero(3)).unwrap(), e1);

        let a = Sub::span(3, &[V::from_i64(&[1, 1, 0])]).unwrap();
        let b = Sub::span(3, &[V::from_i64(&[1, -1, 0])]).unwrap();
        assert_eq!(a.join(&b).unwrap(), Sub::coordinate(3, [0, 1]));

        assert_eq!(a.meet(&Sub::full(3)).unwrap(), a);
        assert!(e1.meet(&e2).unwrap().is_zero());
        let a = Sub::coordinate(3, [0, 1]);
        let b = Sub::coordinate(3, [1, 2]);
        assert_eq!(a.meet(&b).unwrap(), Sub::coordinate(3, [1]));

        assert!(matches!(
            e1.join(&Sub::zero(2)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(e1.meet(&Sub::zero(4)).is_err());
    }

    #[test]
    fn complement_examples() {
        assert!(Sub::zero(3).complement().is_full());
        assert_eq!(Sub::coordinate(3, [0]).complement(), Sub::coordinate(3, [1, 2]));
        let s = Sub::span(2, &[V::from_i64(&[1, 1])]).unwrap();
        assert_eq!(s.complement(), Sub::span(2, &[V::from_i64(&[1, -1])]).unwrap());
        assert_eq!(s.complement().complement(), s);
    }

    #[test]
    fn gaussian_complement_uses_conjugate() {
        type G = GaussianRational;
        let v = Vector::new(vec![G::from_i64(1), G::i()]);
        let s = Subspace::span(2, std::slice::from_ref(&v)).unwrap();
        let c = s.complement();
        assert_eq!(c.dim(), 1);
        let w = c.basis_vectors().remove(0);
        assert!(w.inner(&v).is_zero());
        let p = s.projector();
        assert_eq!(&p * &p, p);
        assert_eq!(p.adjoint(), p);
    }

    #[test]
    fn annihilation_matches_projector_product() {
        let t = t1::<BigRational>();
        let p1 = Sub::coordinate(4, [0]);
        let p2 = Sub::coordinate(4, [0, 1]);
        for (q, p) in [(p1.complement(), p2.clone()), (p2.complement(), p2.clone()), (p1.clone(), p1.clone())] {
            let direct = (&(&q.projector() * &t) * &p.projector()).is_zero();
            assert_eq!(annihilates(&q, &t, &p), direct);
        }
        assert!(annihilates(&p1.complement(), &t, &p2));
    }
}
