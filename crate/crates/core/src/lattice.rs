//! Finite subspace lattices, nests and partitions.

use crate::error::{check_dim, Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// A finite family of subspaces containing `0` and the whole space and
/// closed under `∨` and `∧`.
///
/// Elements are kept sorted by dimension (stable with respect to input
/// order), so for a nest the element order is the chain order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceLattice<S> {
    ambient_dim: usize,
    elements: Vec<Subspace<S>>,
}

impl<S: Scalar> SubspaceLattice<S> {
    /// Validates closure under pairwise join and meet. `0` and `I` are
    /// added when missing; duplicates are dropped.
    pub fn new(ambient_dim: usize, elements: Vec<Subspace<S>>) -> Result<Self> {
        let lattice = Self::assemble(ambient_dim, elements)?;
        lattice.check_closed()?;
        Ok(lattice)
    }

    fn assemble(ambient_dim: usize, elements: Vec<Subspace<S>>) -> Result<Self> {
        let mut uniq: Vec<Subspace<S>> = Vec::with_capacity(elements.len() + 2);
        for e in std::iter::once(Subspace::zero(ambient_dim))
            .chain(elements)
            .chain(std::iter::once(Subspace::full(ambient_dim)))
        {
            check_dim(ambient_dim, e.ambient_dim())?;
            if !uniq.contains(&e) {
                uniq.push(e);
            }
        }
        uniq.sort_by_key(Subspace::dim);
        Ok(Self {
            ambient_dim,
            elements: uniq,
        })
    }

    fn check_closed(&self) -> Result<()> {
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i + 1..] {
                if !self.contains(&a.join(b)?) {
                    return Err(Error::InvalidLattice(format!(
                        "join of {a} and {b} is not a member"
                    )));
                }
                if !self.contains(&a.meet(b)?) {
                    return Err(Error::InvalidLattice(format!(
                        "meet of {a} and {b} is not a member"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The smallest lattice containing `generators`, or an error once the
    /// closure grows past `max_elements`.
    pub fn generated_by(
        ambient_dim: usize,
        generators: Vec<Subspace<S>>,
        max_elements: usize,
    ) -> Result<Self> {
        let mut lattice = Self::assemble(ambient_dim, generators)?;
        loop {
            let mut fresh = Vec::new();
            let els = &lattice.elements;
            for (i, a) in els.iter().enumerate() {
                for b in &els[i + 1..] {
                    for c in [a.join(b)?, a.meet(b)?] {
                        if !lattice.contains(&c) && !fresh.contains(&c) {
                            fresh.push(c);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                return Ok(lattice);
            }
            let mut all = lattice.elements;
            all.extend(fresh);
            if all.len() > max_elements {
                return Err(Error::InvalidLattice(format!(
                    "closure exceeds {max_elements} elements"
                )));
            }
            lattice = Self::assemble(ambient_dim, all)?;
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn elements(&self) -> &[Subspace<S>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, s: &Subspace<S>) -> Option<usize> {
        self.elements.iter().position(|e| e == s)
    }

    pub fn contains(&self, s: &Subspace<S>) -> bool {
        self.index_of(s).is_some()
    }

    pub fn position(&self, s: &Subspace<S>) -> Result<usize> {
        self.index_of(s).ok_or(Error::NotAMember("lattice"))
    }

    /// `L⊥ = {P⊥ : P ∈ L}`.
    pub fn perp(&self) -> Self {
        let elements = self.elements.iter().map(Subspace::complement).collect();
        Self::assemble(self.ambient_dim, elements).expect("complements keep the ambient dimension")
    }

    pub fn is_totally_ordered(&self) -> bool {
        self.elements
            .windows(2)
            .all(|w| w[0].is_proper_subspace_of(&w[1]))
    }
}

/// A finite totally ordered subspace lattice `0 = P₀ < P₁ < … < P_k = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nest<S> {
    lattice: SubspaceLattice<S>,
}

impl<S: Scalar> Nest<S> {
    /// Builds a nest from its members; `0` and `I` may be omitted.
    pub fn new(ambient_dim: usize, chain: Vec<Subspace<S>>) -> Result<Self> {
        let lattice = SubspaceLattice::assemble(ambient_dim, chain)?;
        if let Some(w) = lattice
            .elements
            .windows(2)
            .find(|w| !w[0].is_proper_subspace_of(&w[1]))
        {
            return Err(Error::InvalidNest(format!(
                "{} and {} are not comparable",
                w[0], w[1]
            )));
        }
        Ok(Self { lattice })
    }

    /// Coordinate nest: `P_d = span{e₁, …, e_d}` for every `d` in `dims`.
    pub fn coordinate(ambient_dim: usize, dims: &[usize]) -> Result<Self> {
        let chain = dims
            .iter()
            .map(|&d| {
                if d > ambient_dim {
                    Err(Error::InvalidNest(format!(
                        "coordinate dimension {d} exceeds ambient dimension {ambient_dim}"
                    )))
                } else {
                    Ok(Subspace::coordinate(ambient_dim, 0..d))
                }
            })
            .collect::<Result<_>>()?;
        Self::new(ambient_dim, chain)
    }

    /// The trivial nest `{0, I}`.
    pub fn trivial(ambient_dim: usize) -> Self {
        Self::new(ambient_dim, Vec::new()).expect("{0, I} is a nest")
    }

    pub fn from_lattice(lattice: SubspaceLattice<S>) -> Result<Self> {
        if lattice.is_totally_ordered() {
            Ok(Self { lattice })
        } else {
            Err(Error::InvalidNest("lattice is not totally ordered".into()))
        }
    }

    pub fn lattice(&self) -> &SubspaceLattice<S> {
        &self.lattice
    }

    pub fn ambient_dim(&self) -> usize {
        self.lattice.ambient_dim
    }

    /// Members in increasing order.
    pub fn chain(&self) -> &[Subspace<S>] {
        &self.lattice.elements
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    pub fn position(&self, p: &Subspace<S>) -> Result<usize> {
        self.lattice
            .index_of(p)
            .ok_or(Error::NotAMember("nest"))
    }

    /// `P₋`, the join of the strict predecessors; `0₋ = 0`.
    pub fn predecessor(&self, p: &Subspace<S>) -> Result<Subspace<S>> {
        let i = self.position(p)?;
        Ok(self.chain()[i.saturating_sub(1)].clone())
    }

    /// `P₊`, the meet of the strict successors; `I₊ = I`.
    pub fn successor(&self, p: &Subspace<S>) -> Result<Subspace<S>> {
        let i = self.position(p)?;
        Ok(self.chain()[(i + 1).min(self.len() - 1)].clone())
    }

    pub fn perp(&self) -> Self {
        Self {
            lattice: self.lattice.perp(),
        }
    }
}

impl<S> AsRef<SubspaceLattice<S>> for Nest<S> {
    fn as_ref(&self) -> &SubspaceLattice<S> {
        &self.lattice
    }
}

/// `P x = 0` for the orthogonal projection onto `p`.
fn kills<S: Scalar>(p: &Subspace<S>, x: &Vector<S>) -> bool {
    p.basis_vectors().iter().all(|b| x.inner(b).is_zero())
}

/// `P_x = ∧{P ∈ L : Px = x}`, the smallest member containing `x`.
pub fn p_of_x<S: Scalar>(lattice: &SubspaceLattice<S>, x: &Vector<S>) -> Result<Subspace<S>> {
    check_dim(lattice.ambient_dim(), x.dim())?;
    let mut acc = Subspace::full(lattice.ambient_dim());
    for p in lattice.elements().iter().filter(|p| p.contains(x)) {
        acc = acc.meet(p)?;
    }
    Ok(acc)
}

/// `P̂_x = ∨{P ∈ L : Px = 0}`, the largest member annihilating `x`.
pub fn p_hat_of_x<S: Scalar>(lattice: &SubspaceLattice<S>, x: &Vector<S>) -> Result<Subspace<S>> {
    check_dim(lattice.ambient_dim(), x.dim())?;
    let mut acc = Subspace::zero(lattice.ambient_dim());
    for p in lattice.elements().iter().filter(|p| kills(p, x)) {
        acc = acc.join(p)?;
    }
    Ok(acc)
}

/// A deterministic nonzero vector of a nonzero subspace: the first standard
/// basis vector it contains, else its first canonical basis row.
fn representative<S: Scalar>(gap: &Subspace<S>) -> Vector<S> {
    let n = gap.ambient_dim();
    (0..n)
        .map(|i| Vector::basis(n, i))
        .find(|e| gap.contains(e))
        .unwrap_or_else(|| gap.basis().row(0))
}

/// A vector `x` with `P_x = p` and `P̂_x = below`, for nest members
/// `below < p`.
///
/// `x = u + v` with `u ∈ p ⊖ p₋` and `v ∈ below₊ ⊖ below`; `v` is dropped
/// when `below = p₋`.
pub fn vector_with_supports<S: Scalar>(
    nest: &Nest<S>,
    p: &Subspace<S>,
    below: &Subspace<S>,
) -> Result<Vector<S>> {
    let ip = nest.position(p)?;
    let ib = nest.position(below)?;
    if ib >= ip {
        return Err(Error::Precondition(
            "the annihilated member must lie strictly below the support".into(),
        ));
    }
    let chain = nest.chain();
    let u = representative(&p.minus(&chain[ip - 1])?);
    if ib == ip - 1 {
        return Ok(u);
    }
    let v = representative(&chain[ib + 1].minus(below)?);
    Ok(&u + &v)
}

/// An increasing selection `0 = P₀ < … < P_k = I` of nest members.
#[derive(Clone, Debug)]
pub struct Partition<'a, S> {
    nest: &'a Nest<S>,
    indices: Vec<usize>,
}

impl<'a, S: Scalar> Partition<'a, S> {
    pub fn new(nest: &'a Nest<S>, indices: Vec<usize>) -> Result<Self> {
        let top = nest.len() - 1;
        if indices.first() != Some(&0) || indices.last() != Some(&top) {
            return Err(Error::InvalidPartition(
                "a partition must start at 0 and end at I".into(),
            ));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(
                "partition indices must be strictly increasing".into(),
            ));
        }
        Ok(Self { nest, indices })
    }

    /// The partition using every member of the nest.
    pub fn full(nest: &'a Nest<S>) -> Self {
        Self {
            nest,
            indices: (0..nest.len()).collect(),
        }
    }

    pub fn nest(&self) -> &'a Nest<S> {
        self.nest
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn members(&self) -> impl Iterator<Item = &'a Subspace<S>> + '_ {
        self.indices.iter().map(|&i| &self.nest.chain()[i])
    }
}

/// Upper, lower and block-diagonal parts of an operator relative to a
/// partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncations<S> {
    pub upper: Matrix<S>,
    pub lower: Matrix<S>,
    pub diagonal: Matrix<S>,
}

/// `U = Σ P_{i−1} T (P_i − P_{i−1})`, `L = Σ P_i⊥ T (P_i − P_{i−1})`,
/// `D = Σ (P_i − P_{i−1}) T (P_i − P_{i−1})`.
pub fn truncations<S: Scalar>(partition: &Partition<'_, S>, t: &Matrix<S>) -> Result<Truncations<S>> {
    let n = partition.nest().ambient_dim();
    check_dim(n, t.rows())?;
    check_dim(n, t.cols())?;
    let projectors: Vec<Matrix<S>> = partition.members().map(Subspace::projector).collect();
    let id = Matrix::identity(n);
    let mut upper = Matrix::zeros(n, n);
    let mut lower = Matrix::zeros(n, n);
    let mut diagonal = Matrix::zeros(n, n);
    for w in projectors.windows(2) {
        let (prev, cur) = (&w[0], &w[1]);
        let block = cur - prev;
        let t_block = t * &block;
        upper = &upper + &(prev * &t_block);
        lower = &lower + &(&(&id - cur) * &t_block);
        diagonal = &diagonal + &(&block * &t_block);
    }
    Ok(Truncations {
        upper,
        lower,
        diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{full_coordinate_nest, t1};
    use num::BigRational;

    type Sub = Subspace<BigRational>;
    type V = Vector<BigRational>;
    type M = Matrix<BigRational>;

    fn n4() -> Nest<BigRational> {
        full_coordinate_nest(4)
    }

    fn p(n: usize, d: usize) -> Sub {
        Sub::coordinate(n, 0..d)
    }

    #[test]
    fn perp_examples() {
        let trivial = Nest::<BigRational>::trivial(3);
        assert_eq!(trivial.lattice().perp(), *trivial.lattice());

        let n2 = full_coordinate_nest::<BigRational>(2);
        let perp = n2.lattice().perp();
        assert_eq!(
            perp.elements(),
            &[Sub::zero(2), Sub::coordinate(2, [1]), Sub::full(2)]
        );
        assert_eq!(perp.perp(), *n2.lattice());
    }

    #[test]
    fn lattice_rejects_unclosed_family() {
        let a = Sub::coordinate(3, [0]);
        let b = Sub::coordinate(3, [1]);
        let err = SubspaceLattice::new(3, vec![a.clone(), b.clone()]).unwrap_err();
        assert!(matches!(err, Error::InvalidLattice(_)));
        let closed = SubspaceLattice::generated_by(3, vec![a, b], 16).unwrap();
        assert_eq!(closed.len(), 5);
        assert!(!closed.is_totally_ordered());
    }

    #[test]
    fn nest_rejects_incomparable_members() {
        let err = Nest::<BigRational>::new(3, vec![Sub::coordinate(3, [0]), Sub::coordinate(3, [1])])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidNest(_)));
        assert!(Nest::<BigRational>::coordinate(2, &[3]).is_err());
    }

    #[test]
    fn p_of_x_examples() {
        let n = n4();
        let l = n.lattice();
        assert_eq!(p_of_x(l, &V::basis(4, 0)).unwrap(), p(4, 1));
        assert!(p_of_x(l, &V::zeros(4)).unwrap().is_zero());
        assert_eq!(p_of_x(l, &V::from_i64(&[1, 0, 1, 0])).unwrap(), p(4, 3));
        assert!(p_of_x(l, &V::zeros(3)).is_err());
    }

    #[test]
    fn p_hat_of_x_examples() {
        let n = n4();
        let l = n.lattice();
        assert!(p_hat_of_x(l, &V::basis(4, 0)).unwrap().is_zero());
        assert!(p_hat_of_x(l, &V::zeros(4)).unwrap().is_full());
        assert_eq!(p_hat_of_x(l, &V::basis(4, 2)).unwrap(), p(4, 2));
    }

    #[test]
    fn neighbours() {
        let n = n4();
        assert_eq!(n.predecessor(&p(4, 2)).unwrap(), p(4, 1));
        assert_eq!(n.successor(&p(4, 2)).unwrap(), p(4, 3));
        assert!(n.predecessor(&p(4, 0)).unwrap().is_zero());
        assert!(n.successor(&p(4, 4)).unwrap().is_full());
        let stranger = Sub::coordinate(4, [3]);
        assert_eq!(n.predecessor(&stranger), Err(Error::NotAMember("nest")));
    }

    #[test]
    fn vector_with_supports_examples() {
        let n = n4();
        assert_eq!(vector_with_supports(&n, &p(4, 1), &p(4, 0)).unwrap(), V::basis(4, 0));
        assert_eq!(
            vector_with_supports(&n, &p(4, 3), &p(4, 1)).unwrap(),
            V::from_i64(&[0, 1, 1, 0])
        );
        assert_eq!(vector_with_supports(&n, &p(4, 2), &p(4, 1)).unwrap(), V::basis(4, 1));
        assert!(matches!(
            vector_with_supports(&n, &p(4, 1), &p(4, 2)),
            Err(Error::Precondition(_))
        ));
        assert!(vector_with_supports(&n, &p(4, 1), &p(4, 1)).is_err());
    }

    #[test]
    fn truncation_examples() {
        let n = n4();
        let upper_t = M::from_i64(&[&[1, 2, 3, 4], &[0, 5, 6, 7], &[0, 0, 8, 9], &[0, 0, 0, 1]]);
        let tr = truncations(&Partition::full(&n), &upper_t).unwrap();
        let diag = M::from_i64(&[&[1, 0, 0, 0], &[0, 5, 0, 0], &[0, 0, 8, 0], &[0, 0, 0, 1]]);
        assert_eq!(tr.diagonal, diag);
        assert!(tr.lower.is_zero());

        let t = t1::<BigRational>();
        let tr = truncations(&Partition::new(&n, vec![0, 4]).unwrap(), &t).unwrap();
        assert!(tr.upper.is_zero() && tr.lower.is_zero());
        assert_eq!(tr.diagonal, t);

        let tr = truncations(&Partition::new(&n, vec![0, 2, 4]).unwrap(), &t).unwrap();
        let upper = M::from_i64(&[&[0, 0, 0, 1], &[0, 0, 1, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        assert_eq!(tr.upper, upper);
        assert_eq!(&(&tr.upper + &tr.lower) + &tr.diagonal, t);
    }

    #[test]
    fn partition_validation() {
        let n = n4();
        assert!(Partition::new(&n, vec![1, 4]).is_err());
        assert!(Partition::new(&n, vec![0, 2, 2, 4]).is_err());
        assert!(Partition::new(&n, vec![0, 3]).is_err());
        assert!(truncations(&Partition::full(&n), &M::zeros(3, 3)).is_err());
    }
}
