//! Operator spaces, nest algebras, Lie modules and decomposability.

use std::fmt;

use serde::Serialize;

use crate::decompose::{decompose, Rank1Term};
use crate::error::{check_dim, Error, Result};
use crate::lattice::Nest;
use crate::matrix::{outer, Matrix, Vector};
use crate::random::Sampler;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// Default number of random vectors probed for rank-one elements.
pub const DEFAULT_SAMPLES: usize = 64;

/// Entry bound for the random probe vectors.
pub const PROBE_ENTRY_BOUND: i64 = 1_000_000;

/// A linear subspace of the `n × n` matrices, stored as a canonical subspace
/// of the row-major vectorizations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSpace<S> {
    n: usize,
    space: Subspace<S>,
}

impl<S: Scalar> OperatorSpace<S> {
    pub fn span(n: usize, generators: &[Matrix<S>]) -> Result<Self> {
        let vs = generators
            .iter()
            .map(|g| {
                check_dim(n, g.rows())?;
                check_dim(n, g.cols())?;
                Ok(g.vectorize())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            space: Subspace::span(n * n, &vs)?,
        })
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            space: Subspace::full(n * n),
        }
    }

    /// The scalar multiples of the identity.
    pub fn scalars(n: usize) -> Self {
        Self::span(n, &[Matrix::identity(n)]).expect("identity has the right shape")
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> Vec<Matrix<S>> {
        self.space
            .basis_vectors()
            .iter()
            .map(|v| Matrix::unvectorize(self.n, self.n, v).expect("vector has n² entries"))
            .collect()
    }

    pub fn contains(&self, x: &Matrix<S>) -> Result<bool> {
        check_dim(self.n, x.rows())?;
        check_dim(self.n, x.cols())?;
        Ok(self.space.contains(&x.vectorize()))
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        Ok(Self {
            n: self.n,
            space: self.space.join(&other.space)?,
        })
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.space.is_subspace_of(&other.space)
    }
}

impl<S: Scalar> fmt::Display for OperatorSpace<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "operator space of dimension {} in M_{}", self.dim(), self.n)
    }
}

/// `{X : P⊥XP = 0 for all P ∈ N}`.
pub fn nest_algebra<S: Scalar>(nest: &Nest<S>) -> OperatorSpace<S> {
    let n = nest.ambient_dim();
    let mut rows = Vec::new();
    for p in nest.chain() {
        if p.is_zero() || p.is_full() {
            continue;
        }
        // ⟨X p, q⟩ = Σ conj(q_a) X_ab p_b for p ∈ P, q ∈ P⊥
        for q in p.complement().basis_vectors() {
            for v in p.basis_vectors() {
                let row = (0..n * n)
                    .map(|k| q[k / n].conj() * &v[k % n])
                    .collect();
                rows.push(row);
            }
        }
    }
    let constraints = Matrix::from_rows(n * n, rows).expect("constraint rows have n² entries");
    OperatorSpace {
        n,
        space: Subspace::null_space(&constraints),
    }
}

/// `x ⊗ y` lies in the nest algebra iff some member `P` has `Px = x` and
/// `P₋y = 0`.
pub fn rank_one_in_nest_algebra<S: Scalar>(x: &Vector<S>, y: &Vector<S>, nest: &Nest<S>) -> bool {
    let chain = nest.chain();
    chain.iter().enumerate().any(|(i, p)| {
        let below = &chain[i.saturating_sub(1)];
        p.contains(x) && below.basis_vectors().iter().all(|b| y.inner(b).is_zero())
    })
}

/// Membership in the nest algebra by the defining constraints. Rank-one
/// inputs are additionally run through [`rank_one_in_nest_algebra`] and the
/// two answers must agree.
pub fn in_nest_algebra<S: Scalar>(x: &Matrix<S>, nest: &Nest<S>) -> Result<bool> {
    let n = nest.ambient_dim();
    check_dim(n, x.rows())?;
    check_dim(n, x.cols())?;
    let by_constraints = nest
        .chain()
        .iter()
        .all(|p| crate::subspace::annihilates(&p.complement(), x, p));
    let factors = x.rank_factorize();
    if let [(a, b)] = factors.as_slice() {
        if rank_one_in_nest_algebra(a, b, nest) != by_constraints {
            return Err(Error::Invariant(
                "rank-one membership criterion disagrees with the constraint test".into(),
            ));
        }
    }
    Ok(by_constraints)
}

/// `[A, B] = AB − BA`.
pub fn lie_bracket<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    for m in [a, b] {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
    }
    check_dim(a.rows(), b.rows())?;
    a.commutator(b)
}

/// The smallest subspace containing `generators` and closed under brackets
/// with the nest algebra.
pub fn lie_module_closure<S: Scalar>(generators: &[Matrix<S>], nest: &Nest<S>) -> Result<OperatorSpace<S>> {
    let n = nest.ambient_dim();
    let algebra = nest_algebra(nest).basis();
    let mut module = OperatorSpace::span(n, generators)?;
    loop {
        let before = module.dim();
        let mut added = Vec::new();
        for m in module.basis() {
            for t in &algebra {
                let bracket = m.commutator(t)?;
                if !module.contains(&bracket)? {
                    added.push(bracket);
                }
            }
        }
        if !added.is_empty() {
            module = module.join(&OperatorSpace::span(n, &added)?)?;
        }
        if module.dim() == before {
            return Ok(module);
        }
    }
}

/// `{y : x ⊗ y ∈ M}`; linear in `y` once `x` is fixed.
pub fn rank1_partners<S: Scalar>(module: &OperatorSpace<S>, x: &Vector<S>) -> Result<Subspace<S>> {
    let n = module.n;
    check_dim(n, x.dim())?;
    if x.is_zero() {
        return Err(Error::Precondition("rank-one partners need a nonzero x".into()));
    }
    // v ∈ M iff ⟨v, c⟩ = 0 for c ∈ M⊥. With v_ij = x_i conj(y_j) this reads
    // Σ_j y_j Σ_i conj(x_i) c_ij = 0.
    let rows: Vec<Vec<S>> = module
        .space
        .complement()
        .basis_vectors()
        .iter()
        .map(|c| {
            (0..n)
                .map(|j| (0..n).fold(S::zero(), |acc, i| acc + &(x[i].conj() * &c[i * n + j])))
                .collect()
        })
        .collect();
    let constraints = Matrix::from_rows(n, rows)?;
    Ok(Subspace::null_space(&constraints))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decomposability {
    Decomposable,
    NotDecomposable,
    Undetermined,
}

impl fmt::Display for Decomposability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decomposability::Decomposable => "DECOMPOSABLE",
            Decomposability::NotDecomposable => "NOT_DECOMPOSABLE",
            Decomposability::Undetermined => "UNDETERMINED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposabilityVerdict<S> {
    pub status: Decomposability,
    /// Present iff the status is `Decomposable`.
    pub witness: Option<Vec<Rank1Term<S>>>,
    pub certificate: Option<String>,
    pub seed: u64,
    pub samples: usize,
}

pub const NO_RANK_ONE_CERTIFICATE: &str = "no nonzero rank-1 element detected (sampled)";

/// Three-stage decomposability test of `t` inside `module`.
///
/// 1. Decompose `t` along its kernel set; if every term lies in `module`
///    the terms are a witness.
/// 2. Otherwise probe for rank-one elements `x ⊗ y` of `module` with `x`
///    running over the standard basis and `samples` seeded random vectors.
///    Finding none yields `NotDecomposable`: for such `x` the set of
///    partners `y` is computed exactly, so the only gap is `x` lying on an
///    exceptional set the samples missed.
/// 3. Otherwise `Undetermined`.
pub fn check_decomposable<S: Scalar>(
    t: &Matrix<S>,
    module: &OperatorSpace<S>,
    nest: &Nest<S>,
    seed: u64,
    samples: usize,
) -> Result<DecomposabilityVerdict<S>> {
    let n = nest.ambient_dim();
    check_dim(n, module.n)?;
    if !module.contains(t)? {
        return Err(Error::NotInModule);
    }

    let d = decompose(t, nest)?;
    let mut all_in = d.sum() == *t;
    for term in &d.terms {
        all_in &= module.contains(&term.matrix())?;
    }
    if all_in {
        return Ok(DecomposabilityVerdict {
            status: Decomposability::Decomposable,
            witness: Some(d.terms),
            certificate: Some("kernel-set aligned rank-1 terms all lie in the module".into()),
            seed,
            samples,
        });
    }

    let mut sampler = Sampler::new(seed);
    let probes = (0..n)
        .map(|i| Vector::basis(n, i))
        .chain((0..samples).map(|_| sampler.integer_vector(n, PROBE_ENTRY_BOUND)));
    for x in probes {
        if x.is_zero() {
            continue;
        }
        let partners = rank1_partners(module, &x)?;
        if let Some(y) = partners.basis_vectors().into_iter().next() {
            debug_assert!(module.contains(&outer(&x, &y))?);
            return Ok(DecomposabilityVerdict {
                status: Decomposability::Undetermined,
                witness: None,
                certificate: Some(format!(
                    "module contains the rank-1 element {x} ⊗ {y}; kernel-set terms leave the module"
                )),
                seed,
                samples,
            });
        }
    }
    Ok(DecomposabilityVerdict {
        status: Decomposability::NotDecomposable,
        witness: None,
        certificate: Some(format!(
            "{NO_RANK_ONE_CERTIFICATE}: {n} basis vectors and {samples} random vectors probed (seed {seed}); \
             rank-1 elements whose left factor avoids every probe cannot be excluded"
        )),
        seed,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::full_coordinate_nest;
    use num::traits::Zero;
    use num::BigRational;

    type M = Matrix<BigRational>;
    type V = Vector<BigRational>;

    fn e(n: usize, i: usize, j: usize) -> M {
        M::unit(n, i, j)
    }

    #[test]
    fn nest_algebra_examples() {
        for n in 1..=5 {
            let alg = nest_algebra(&full_coordinate_nest::<BigRational>(n));
            assert_eq!(alg.dim(), n * (n + 1) / 2);
        }
        assert_eq!(nest_algebra(&Nest::<BigRational>::trivial(3)).dim(), 9);
        let alg = nest_algebra(&full_coordinate_nest::<BigRational>(2));
        let expected = OperatorSpace::span(2, &[e(2, 1, 1), e(2, 1, 2), e(2, 2, 2)]).unwrap();
        assert_eq!(alg, expected);
    }

    #[test]
    fn membership_examples() {
        let n2 = full_coordinate_nest::<BigRational>(2);
        assert!(in_nest_algebra(&e(2, 1, 2), &n2).unwrap());
        assert!(!in_nest_algebra(&e(2, 2, 1), &n2).unwrap());
        let n4 = full_coordinate_nest::<BigRational>(4);
        let x = outer(&V::basis(4, 0), &V::basis(4, 1));
        assert!(in_nest_algebra(&x, &n4).unwrap());
        assert!(rank_one_in_nest_algebra(&V::basis(4, 0), &V::basis(4, 1), &n4));
    }

    #[test]
    fn bracket_examples() {
        let a = M::from_i64(&[&[1, 2], &[3, 4]]);
        assert!(lie_bracket(&a, &a).unwrap().is_zero());
        assert_eq!(lie_bracket(&e(2, 1, 2), &e(2, 2, 2)).unwrap(), e(2, 1, 2));
        assert!(lie_bracket(&M::identity(2), &a).unwrap().is_zero());
        assert!(lie_bracket(&a, &M::identity(3)).is_err());
    }

    #[test]
    fn closure_examples() {
        let n4 = full_coordinate_nest::<BigRational>(4);
        let m = lie_module_closure(&[M::identity(4)], &n4).unwrap();
        assert_eq!(m, OperatorSpace::scalars(4));

        let n2 = full_coordinate_nest::<BigRational>(2);
        let m = lie_module_closure(&[e(2, 1, 2)], &n2).unwrap();
        assert_eq!(m, OperatorSpace::span(2, &[e(2, 1, 2)]).unwrap());
    }

    #[test]
    fn six_by_six_module() {
        let n6 = full_coordinate_nest::<BigRational>(6);
        let m = lie_module_closure(&[e(6, 6, 5)], &n6).unwrap();
        assert_eq!(m.dim(), 11);
        for b in m.basis() {
            assert!(b.trace().is_zero());
            for i in 0..6 {
                for j in 0..4 {
                    assert!(b[(i, j)].is_zero());
                }
            }
        }
        assert!(!m.contains(&e(6, 6, 6)).unwrap());
        assert!(m.contains(&(&e(6, 6, 6) - &e(6, 5, 5))).unwrap());
        assert!(m.contains(&M::zeros(6, 6)).unwrap());

        let partners = rank1_partners(&m, &V::basis(6, 5)).unwrap();
        assert_eq!(partners, Subspace::coordinate(6, [4]));
    }

    #[test]
    fn partner_examples() {
        let full = OperatorSpace::<BigRational>::full(3);
        assert!(rank1_partners(&full, &V::from_i64(&[1, 2, 3])).unwrap().is_full());
        let scalars = OperatorSpace::<BigRational>::scalars(3);
        assert!(rank1_partners(&scalars, &V::from_i64(&[1, 0, -1])).unwrap().is_zero());
        assert!(rank1_partners(&scalars, &V::zeros(3)).is_err());
    }

    #[test]
    fn decomposability_examples() {
        for n in 2..=4 {
            let nest = full_coordinate_nest::<BigRational>(n);
            let v = check_decomposable(&M::identity(n), &OperatorSpace::scalars(n), &nest, 0, 8).unwrap();
            assert_eq!(v.status, Decomposability::NotDecomposable);
            assert!(v.witness.is_none());
            assert!(v.certificate.unwrap().starts_with(NO_RANK_ONE_CERTIFICATE));
        }

        let n2 = full_coordinate_nest::<BigRational>(2);
        let v = check_decomposable(&e(2, 1, 2), &OperatorSpace::full(2), &n2, 0, 8).unwrap();
        assert_eq!(v.status, Decomposability::Decomposable);
        let w = v.witness.unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].matrix(), e(2, 1, 2));

        let n6 = full_coordinate_nest::<BigRational>(6);
        let m = lie_module_closure(&[e(6, 6, 5)], &n6).unwrap();
        let v = check_decomposable(&e(6, 6, 5), &m, &n6, 0, 8).unwrap();
        assert_eq!(v.status, Decomposability::Decomposable);

        assert_eq!(
            check_decomposable(&e(2, 2, 1), &OperatorSpace::scalars(2), &n2, 0, 8),
            Err(Error::NotInModule)
        );
    }

    #[test]
    fn undetermined_when_rank_one_elements_exist() {
        // M = span{E11 - E22, E12}: I-free, contains the rank-one E12 but
        // E11 - E22 splits into terms outside M.
        let n2 = full_coordinate_nest::<BigRational>(2);
        let m = OperatorSpace::span(2, &[&e(2, 1, 1) - &e(2, 2, 2), e(2, 1, 2)]).unwrap();
        let v = check_decomposable(&(&e(2, 1, 1) - &e(2, 2, 2)), &m, &n2, 0, 8).unwrap();
        assert_eq!(v.status, Decomposability::Undetermined);
    }
}
