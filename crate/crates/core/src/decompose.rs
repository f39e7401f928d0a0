//! Rank-one decompositions aligned with the kernel set of an operator.
//!
//! Over a nest, let `(Φ₁, Ψ₁) ⪯ … ⪯ (Φ_k, Ψ_k)` be the kernel set members
//! with `Ψ ≠ I` and `Φ₀ = φ(0)`. Then `T Φ₀ = 0` and
//!
//! ```text
//! T = Σⱼ Ψⱼ⊥ · T · (Φⱼ − Φⱼ₋₁)
//! ```
//!
//! Each slice is rank factorized. Every resulting rank-one term `R`
//! satisfies `ψ(P)·R·φ(P) = 0` for all members `P` of the nest.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::KernelMap;
use crate::lattice::Nest;
use crate::matrix::{outer, Matrix, Vector};
use crate::report::Check;
use crate::scalar::Scalar;
use crate::subspace::{annihilates, Subspace};

/// A rank-one term `x ⊗ y` and the slice it was cut from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank1Term<S> {
    pub x: Vector<S>,
    pub y: Vector<S>,
    /// Zero-based index into [`Decomposition::slices`].
    pub slice_index: usize,
}

impl<S: Scalar> Rank1Term<S> {
    pub fn matrix(&self) -> Matrix<S> {
        outer(&self.x, &self.y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice<S> {
    pub phi_prev: Subspace<S>,
    pub phi: Subspace<S>,
    pub psi: Subspace<S>,
    /// `Ψ⊥ · T · (Φ − Φ_prev)`
    pub matrix: Matrix<S>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition<S> {
    pub operator: Matrix<S>,
    /// `Φ₀ = φ(0)`
    pub phi0: Subspace<S>,
    pub slices: Vec<Slice<S>>,
    pub terms: Vec<Rank1Term<S>>,
}

impl<S: Scalar> Decomposition<S> {
    pub fn sum(&self) -> Matrix<S> {
        let n = self.operator.rows();
        self.terms
            .iter()
            .fold(Matrix::zeros(n, n), |acc, t| &acc + &t.matrix())
    }
}

/// The kernel set members with `ψ ≠ I`, in `⪯` order.
fn nontrivial_levels<S: Scalar>(map: &KernelMap<'_, S>) -> Vec<(Subspace<S>, Subspace<S>)> {
    map.kernel_set()
        .entries
        .into_iter()
        .filter(|e| !e.pair.q.is_full())
        .map(|e| (e.pair.p, e.pair.q))
        .collect()
}

pub fn decompose<S: Scalar>(t: &Matrix<S>, nest: &Nest<S>) -> Result<Decomposition<S>> {
    let map = KernelMap::new(t, nest.lattice())?;
    let n = nest.ambient_dim();
    let levels = nontrivial_levels(&map);

    if levels.is_empty() != t.is_zero() {
        return Err(Error::Invariant(
            "no kernel pair with ψ ≠ I must coincide with T = 0".into(),
        ));
    }
    if levels
        .windows(2)
        .any(|w| !w[0].0.is_proper_subspace_of(&w[1].0) || !w[1].1.is_proper_subspace_of(&w[0].1))
    {
        return Err(Error::Invariant("kernel set levels are not strictly ordered".into()));
    }

    let phi0 = map.phi(&Subspace::zero(n))?.clone();
    let mut slices = Vec::with_capacity(levels.len());
    let mut terms = Vec::new();
    let mut prev = phi0.clone();
    for (j, (phi, psi)) in levels.into_iter().enumerate() {
        let block = &phi.projector() - &prev.projector();
        let matrix = &(&psi.complement_projector() * t) * &block;
        terms.extend(
            matrix
                .rank_factorize()
                .into_iter()
                .map(|(x, y)| Rank1Term { x, y, slice_index: j }),
        );
        slices.push(Slice {
            phi_prev: prev,
            phi: phi.clone(),
            psi,
            matrix,
        });
        prev = phi;
    }

    Ok(Decomposition {
        operator: t.clone(),
        phi0,
        slices,
        terms,
    })
}

/// Outcome of [`verify_decomposition`].
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub checks: Vec<Check>,
    /// Per slice `j`: whether `Ψⱼ⊥ = σ(Ψⱼ₋₁⊥)` (with `Ψ₀ = I`).
    pub sigma_chain: Vec<bool>,
    pub rank: usize,
    pub k: usize,
    pub term_count: usize,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        crate::report::all_mandatory_pass(&self.checks)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.mandatory && !c.passed)
    }
}

/// Re-derives every property a decomposition over `nest` must have.
pub fn verify_decomposition<S: Scalar>(d: &Decomposition<S>, nest: &Nest<S>) -> Result<DecompositionReport> {
    let t = &d.operator;
    let map = KernelMap::new(t, nest.lattice())?;
    let n = nest.ambient_dim();
    let rank = t.rank();
    let k = d.slices.len();
    let mut checks = Vec::new();

    let sum = d.sum();
    checks.push(Check::mandatory(
        "reconstruction",
        sum == *t,
        if sum == *t { String::new() } else { "sum of terms differs from the operator".into() },
    ));

    let degenerate: Vec<usize> = d
        .terms
        .iter()
        .enumerate()
        .filter(|(_, r)| r.x.is_zero() || r.y.is_zero() || r.slice_index >= k)
        .map(|(i, _)| i)
        .collect();
    checks.push(Check::mandatory(
        "terms_rank_one",
        degenerate.is_empty(),
        if degenerate.is_empty() { String::new() } else { format!("degenerate terms {degenerate:?}") },
    ));

    let expected_levels = nontrivial_levels(&map);
    let levels_match = expected_levels.len() == k
        && d.slices
            .iter()
            .zip(&expected_levels)
            .all(|(s, (phi, psi))| s.phi == *phi && s.psi == *psi);
    let chained = d.slices.first().is_none_or(|s| s.phi_prev == d.phi0)
        && d.slices.windows(2).all(|w| w[1].phi_prev == w[0].phi);
    checks.push(Check::mandatory(
        "slices_follow_kernel_set",
        levels_match && chained && d.phi0 == *map.phi(&Subspace::zero(n))?,
        format!("k = {k}"),
    ));

    let slice_formula = d.slices.iter().all(|s| {
        let block = &s.phi.projector() - &s.phi_prev.projector();
        s.matrix == &(&s.psi.complement_projector() * t) * &block
    });
    checks.push(Check::mandatory("slice_formula", slice_formula, ""));

    let slice_terms = d.slices.iter().enumerate().all(|(j, s)| {
        let part = d
            .terms
            .iter()
            .filter(|r| r.slice_index == j)
            .fold(Matrix::zeros(n, n), |acc, r| &acc + &r.matrix());
        part == s.matrix
    });
    checks.push(Check::mandatory("terms_sum_to_slices", slice_terms, ""));

    let m = d.terms.len();
    checks.push(Check::mandatory(
        "term_count_bound",
        m <= k * rank && k <= rank,
        format!("m = {m}, k = {k}, rank = {rank}"),
    ));

    checks.push(Check::mandatory(
        "phi0_annihilated",
        annihilates(&Subspace::full(n), t, &d.phi0),
        "",
    ));

    let mut bil_failures = Vec::new();
    for i in 0..nest.len() {
        let (phi, psi) = (map.phi_at(i), map.psi_at(i));
        for (r, term) in d.terms.iter().enumerate() {
            if !annihilates(psi, &term.matrix(), phi) {
                bil_failures.push((i, r));
            }
        }
    }
    checks.push(Check::mandatory(
        "kernel_pairs_in_term_bilattices",
        bil_failures.is_empty(),
        if bil_failures.is_empty() {
            String::new()
        } else {
            format!("(member, term) failures: {bil_failures:?}")
        },
    ));

    let mut orth = d.slices.iter().all(|s| annihilates(&Subspace::full(n), &s.matrix, &d.phi0));
    for l in &d.slices {
        for s in &d.slices {
            orth &= annihilates(&l.psi, &s.matrix, &l.phi);
        }
    }
    checks.push(Check::mandatory("slice_orthogonality", orth, ""));

    let mut sigma_chain = Vec::with_capacity(k);
    let mut prev_psi_perp = Subspace::zero(n);
    for s in &d.slices {
        let sigma = map.sigma(&prev_psi_perp)?;
        let psi_perp = s.psi.complement();
        sigma_chain.push(sigma == psi_perp);
        prev_psi_perp = psi_perp;
    }
    checks.push(Check::informational(
        "sigma_chain",
        sigma_chain.iter().all(|&b| b),
        "only guaranteed for continuous nests",
    ));

    Ok(DecompositionReport {
        checks,
        sigma_chain,
        rank,
        k,
        term_count: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{full_coordinate_nest, t1, t2};
    use num::BigRational;

    type M = Matrix<BigRational>;
    type V = Vector<BigRational>;

    #[test]
    fn zero_operator_has_empty_decomposition() {
        let n = full_coordinate_nest::<BigRational>(4);
        let d = decompose(&M::zeros(4, 4), &n).unwrap();
        assert!(d.terms.is_empty());
        assert!(d.slices.is_empty());
        assert!(d.phi0.is_full());
        assert!(verify_decomposition(&d, &n).unwrap().passed());
    }

    #[test]
    fn t1_splits_into_three_terms() {
        let n = full_coordinate_nest::<BigRational>(4);
        let t = t1::<BigRational>();
        let d = decompose(&t, &n).unwrap();
        assert_eq!(d.slices.len(), 2);
        assert_eq!(d.slices[0].matrix, M::unit(4, 1, 2));
        let cols34 = M::from_i64(&[&[0, 0, 0, 1], &[0, 0, 1, 1], &[0, 0, 1, 1], &[0, 0, 1, 1]]);
        assert_eq!(d.slices[1].matrix, cols34);
        assert_eq!(d.terms.len(), 3);
        assert_eq!(d.terms.iter().filter(|r| r.slice_index == 0).count(), 1);
        assert_eq!(d.sum(), t);
        let report = verify_decomposition(&d, &n).unwrap();
        assert!(report.passed(), "{:?}", report.checks);
        assert_eq!(report.k, 2);
    }

    #[test]
    fn t2_respects_term_bound() {
        let n = full_coordinate_nest::<BigRational>(4);
        let d = decompose(&t2::<BigRational>(), &n).unwrap();
        let report = verify_decomposition(&d, &n).unwrap();
        assert!(report.passed(), "{:?}", report.checks);
        assert!(report.term_count <= 2 * 3);
    }

    #[test]
    fn rank_one_gives_one_term() {
        let n = full_coordinate_nest::<BigRational>(2);
        let d = decompose(&M::unit(2, 1, 2), &n).unwrap();
        assert_eq!(d.terms.len(), 1);
        assert_eq!(d.terms[0].matrix(), M::unit(2, 1, 2));
    }

    #[test]
    fn wrong_sum_is_reported() {
        let n = full_coordinate_nest::<BigRational>(4);
        let mut d = decompose(&t1::<BigRational>(), &n).unwrap();
        d.terms[0].x = d.terms[0].x.scale(&BigRational::from_i64(2));
        let report = verify_decomposition(&d, &n).unwrap();
        assert!(!report.passed());
        let failed: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"reconstruction"));

        let mut d = decompose(&t1::<BigRational>(), &n).unwrap();
        d.terms.push(Rank1Term {
            x: V::zeros(4),
            y: V::basis(4, 0),
            slice_index: 0,
        });
        let report = verify_decomposition(&d, &n).unwrap();
        assert!(report.failures().any(|c| c.name == "terms_rank_one"));
    }
}
