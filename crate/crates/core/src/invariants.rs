//! Seeded property suites over random lattices, nests and operators.
//!
//! Every property runs over `cases` independent instances. Case `i` of a
//! run with seed `s` draws its instance from `Sampler::for_case(s, f + i)`
//! where `f` depends only on the instance family, so properties of the same
//! family see identical `(T, L)` instances. Cases run in parallel; results
//! are collected in case order.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::decompose::{decompose, verify_decomposition};
use crate::error::{Error, Result};
use crate::float;
use crate::kernel::{bil, omega_witness_with, BilatticePair, KernelMap, WITNESS_RETRY_BUDGET};
use crate::lattice::{p_hat_of_x, p_of_x, truncations, vector_with_supports, Nest, SubspaceLattice};
use crate::liemod::{in_nest_algebra, nest_algebra, rank_one_in_nest_algebra};
use crate::matrix::{outer, Matrix, Vector};
use crate::random::Sampler;
use crate::scalar::Scalar;
use crate::subspace::{annihilates, Subspace};

/// Ambient dimensions of random general lattices.
pub const LATTICE_DIMS: std::ops::RangeInclusive<usize> = 2..=6;
/// Ambient dimensions of random nests.
pub const NEST_DIMS: std::ops::RangeInclusive<usize> = 2..=8;

const LATTICE_STREAM: u64 = 0;
const NEST_STREAM: u64 = 1 << 40;
const MAX_REPORTED_FAILURES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// Linear algebra basics: rank, rank factorization, projectors.
    LinearAlgebra,
    /// Lattice laws, dimension formula, De Morgan, closure of `L⊥`.
    LatticeLaws,
    /// `φ` is monotone, `ψ` antitone, `ω` an order homomorphism.
    PhiPsiMonotone,
    /// `ω(P) ∈ BIL(T, L)` with `φ(P) ∈ L`, `ψ(P) ∈ L⊥`; on general lattices
    /// also `ω(ψ(P)⊥) = ω(P)` whenever `ψ(P)⊥ ∈ L`.
    KernelPairInBil,
    /// `(φ(P), P⊥)` and `ω(P)` as a join and a meet over the enumerated
    /// bilattice.
    BilJoinMeet,
    /// `BIL(T, L)` matches a projector-product oracle, is closed under pair
    /// join and meet and contains the extreme pairs.
    BilClosure,
    /// Over nests: `φ(ψ(P)⊥) = φ(P)`, `ω(ψ(P)⊥) = ω(P)` and
    /// `ψ(P) = ∨{Q⊥ : Q⊥ T φ(P) = 0}`.
    PsiComplementFixed,
    /// Over nests: `P₁ < P₂` with `ω(P₁) ≠ ω(P₂)` separates both coordinates
    /// strictly.
    StrictSeparation,
    /// Over nests: `|Ω| ≤ rank(T) + 1`.
    KernelSetSizeBound,
    /// Over nests: `Ω` is a `⪯`-chain listed in increasing order and equals
    /// the image of `ω`.
    KernelSetChain,
    /// The kernel-set aligned decomposition passes every mandatory check.
    Decomposition,
    /// `U + L + D = T`, `U` in the nest algebra and `L*` in the nest algebra.
    TruncationIdentity,
    /// `vector_with_supports` round-trips for every pair of members, and
    /// `P̂ₓ ≤ Pₓ` for random `x`.
    SupportsRoundTrip,
    /// Vectors with pairwise distinct `Pₓ` are linearly independent.
    DistinctSupportsIndependent,
    /// A verified kernel-map witness exists for every member.
    OmegaWitness,
    /// The rank-one membership criterion agrees with the defining
    /// constraints of the nest algebra.
    RankOneMembership,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Lattice,
    Nest,
}

impl Property {
    pub const ALL: [Property; 16] = [
        Property::LinearAlgebra,
        Property::LatticeLaws,
        Property::PhiPsiMonotone,
        Property::KernelPairInBil,
        Property::BilJoinMeet,
        Property::BilClosure,
        Property::PsiComplementFixed,
        Property::StrictSeparation,
        Property::KernelSetSizeBound,
        Property::KernelSetChain,
        Property::Decomposition,
        Property::TruncationIdentity,
        Property::SupportsRoundTrip,
        Property::DistinctSupportsIndependent,
        Property::OmegaWitness,
        Property::RankOneMembership,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::LinearAlgebra => "linear_algebra",
            Property::LatticeLaws => "lattice_laws",
            Property::PhiPsiMonotone => "phi_psi_monotone",
            Property::KernelPairInBil => "kernel_pair_in_bil",
            Property::BilJoinMeet => "bil_join_meet",
            Property::BilClosure => "bil_closure",
            Property::PsiComplementFixed => "psi_complement_fixed",
            Property::StrictSeparation => "strict_separation",
            Property::KernelSetSizeBound => "kernel_set_size_bound",
            Property::KernelSetChain => "kernel_set_chain",
            Property::Decomposition => "decomposition",
            Property::TruncationIdentity => "truncation_identity",
            Property::SupportsRoundTrip => "supports_round_trip",
            Property::DistinctSupportsIndependent => "distinct_supports_independent",
            Property::OmegaWitness => "omega_witness",
            Property::RankOneMembership => "rank_one_membership",
        }
    }

    pub fn family(self) -> Family {
        match self {
            Property::LinearAlgebra
            | Property::LatticeLaws
            | Property::PhiPsiMonotone
            | Property::KernelPairInBil
            | Property::BilJoinMeet
            | Property::BilClosure => Family::Lattice,
            _ => Family::Nest,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown property {s:?}")))
    }
}

/// Result of one case. `checks` counts individual assertions made,
/// `skipped` those whose hypothesis did not hold.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CaseOutcome {
    pub checks: usize,
    pub skipped: usize,
    /// The case attains the bound being tested with equality.
    pub tight: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertySummary {
    pub property: Property,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub checks: usize,
    pub skipped_checks: usize,
    pub tight_cases: usize,
    /// The first few failures as `(case index, message)`.
    pub failures: Vec<(usize, String)>,
}

impl PropertySummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Running tally of assertions inside one case.
struct Tally {
    checks: usize,
    skipped: usize,
    tight: bool,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checks: 0,
            skipped: 0,
            tight: false,
            failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }

    fn finish(self) -> CaseOutcome {
        CaseOutcome {
            checks: self.checks,
            skipped: self.skipped,
            tight: self.tight,
            failure: self.failure,
        }
    }
}

/// The `(T, L)` instance of a general-lattice case and the sampler
/// positioned just after drawing it.
pub fn lattice_instance<S: Scalar>(seed: u64, index: usize) -> (Matrix<S>, SubspaceLattice<S>, Sampler) {
    let mut s = Sampler::for_case(seed, LATTICE_STREAM + index as u64);
    let n = s.rng_range(LATTICE_DIMS);
    let lattice = s.lattice(n);
    let t = s.matrix(n);
    (t, lattice, s)
}

/// The `(T, N)` instance of a nest case and the sampler positioned just
/// after drawing it.
pub fn nest_instance<S: Scalar>(seed: u64, index: usize) -> (Matrix<S>, Nest<S>, Sampler) {
    let mut s = Sampler::for_case(seed, NEST_STREAM + index as u64);
    let n = s.rng_range(NEST_DIMS);
    let nest = s.nest(n);
    let t = s.matrix(n);
    (t, nest, s)
}

pub fn run_case<S: Scalar>(property: Property, seed: u64, index: usize) -> CaseOutcome {
    let mut tally = Tally::new();
    let result = match property.family() {
        Family::Lattice => {
            let (t, l, mut s) = lattice_instance::<S>(seed, index);
            match property {
                Property::LinearAlgebra => linear_algebra(&t, &mut s, &mut tally),
                Property::LatticeLaws => lattice_laws(&l, &mut tally),
                Property::PhiPsiMonotone => phi_psi_monotone(&t, &l, &mut tally),
                Property::KernelPairInBil => kernel_pair_in_bil(&t, &l, &mut tally),
                Property::BilJoinMeet => bil_join_meet(&t, &l, &mut tally),
                Property::BilClosure => bil_closure(&t, &l, &mut tally),
                _ => unreachable!("nest property in the lattice family"),
            }
        }
        Family::Nest => {
            let (t, nest, mut s) = nest_instance::<S>(seed, index);
            match property {
                Property::PsiComplementFixed => psi_complement_fixed(&t, &nest, &mut tally),
                Property::StrictSeparation => strict_separation(&t, &nest, &mut tally),
                Property::KernelSetSizeBound => kernel_set_size_bound(&t, &nest, &mut tally),
                Property::KernelSetChain => kernel_set_chain(&t, &nest, &mut tally),
                Property::Decomposition => decomposition(&t, &nest, &mut tally),
                Property::TruncationIdentity => truncation_identity(&t, &nest, &mut s, &mut tally),
                Property::SupportsRoundTrip => supports_round_trip(&nest, &mut s, &mut tally),
                Property::DistinctSupportsIndependent => distinct_supports(&nest, &mut s, &mut tally),
                Property::OmegaWitness => witness(&t, &nest, seed, &mut tally),
                Property::RankOneMembership => rank_one_membership(&nest, &mut s, &mut tally),
                _ => unreachable!("lattice property in the nest family"),
            }
        }
    };
    if let Err(e) = result {
        tally.check(false, || format!("error: {e}"));
    }
    tally.finish()
}

pub fn run_property<S: Scalar + Send + Sync>(property: Property, seed: u64, cases: usize) -> PropertySummary {
    let outcomes: Vec<CaseOutcome> = (0..cases)
        .into_par_iter()
        .map(|i| run_case::<S>(property, seed, i))
        .collect();
    let failures: Vec<(usize, String)> = outcomes
        .iter()
        .enumerate()
        .filter_map(|(i, o)| o.failure.clone().map(|f| (i, f)))
        .collect();
    PropertySummary {
        property,
        seed,
        cases,
        passed: cases - failures.len(),
        failed: failures.len(),
        checks: outcomes.iter().map(|o| o.checks).sum(),
        skipped_checks: outcomes.iter().map(|o| o.skipped).sum(),
        tight_cases: outcomes.iter().filter(|o| o.tight).count(),
        failures: failures.into_iter().take(MAX_REPORTED_FAILURES).collect(),
    }
}

/// Join and meet tables of a lattice, indexed by element position.
struct Tables {
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
}

impl Tables {
    fn new<S: Scalar>(l: &SubspaceLattice<S>) -> Result<Self> {
        let els = l.elements();
        let mut join = vec![vec![0; els.len()]; els.len()];
        let mut meet = join.clone();
        for (i, a) in els.iter().enumerate() {
            for (j, b) in els.iter().enumerate() {
                join[i][j] = l.position(&a.join(b)?)?;
                meet[i][j] = l.position(&a.meet(b)?)?;
            }
        }
        Ok(Self { join, meet })
    }
}

fn linear_algebra<S: Scalar>(t: &Matrix<S>, s: &mut Sampler, tally: &mut Tally) -> Result<()> {
    let n = t.rows();
    let rank = t.rank();
    let factors = t.rank_factorize();
    tally.check(rank == t.rref().pivots.len(), || "rank differs from pivot count".into());
    tally.check(rank == factors.len(), || "rank differs from factor count".into());
    let sum = factors
        .iter()
        .fold(Matrix::zeros(n, n), |acc, (x, y)| &acc + &outer(x, y));
    tally.check(sum == *t, || "rank factorization does not reconstruct".into());
    tally.check(rank == float::rank(t), || "floating-point rank disagrees".into());

    let sub = s.subspace::<S>(n);
    let p = sub.projector();
    tally.check(&p * &p == p, || format!("projector of {sub} is not idempotent"));
    tally.check(p.adjoint() == p, || format!("projector of {sub} is not self-adjoint"));
    tally.check(Subspace::of_projector(&p)? == sub, || "projector round trip failed".into());
    tally.check(Subspace::range(&p) == sub, || "range of projector differs".into());
    Ok(())
}

fn lattice_laws<S: Scalar>(l: &SubspaceLattice<S>, tally: &mut Tally) -> Result<()> {
    let n = l.ambient_dim();
    let els = l.elements();
    let m = els.len();
    let tables = match Tables::new(l) {
        Ok(t) => t,
        Err(e) => {
            tally.check(false, || format!("lattice not closed: {e}"));
            return Ok(());
        }
    };
    let bottom = l.position(&Subspace::zero(n))?;
    let top = l.position(&Subspace::full(n))?;
    for i in 0..m {
        tally.check(
            tables.join[i][bottom] == i && tables.meet[i][top] == i,
            || format!("element {i}: 0 or I is not an identity"),
        );
        tally.check(
            tables.join[i][top] == top && tables.meet[i][bottom] == bottom,
            || format!("element {i}: 0 or I is not absorbing"),
        );
        for j in 0..m {
            let (a, b) = (&els[i], &els[j]);
            let (jn, mt) = (tables.join[i][j], tables.meet[i][j]);
            tally.check(jn == tables.join[j][i] && mt == tables.meet[j][i], || {
                format!("({i}, {j}): not commutative")
            });
            tally.check(
                tables.join[i][mt] == i && tables.meet[i][jn] == i,
                || format!("({i}, {j}): absorption fails"),
            );
            tally.check(
                els[jn].dim() + els[mt].dim() == a.dim() + b.dim(),
                || format!("({i}, {j}): dimension formula fails"),
            );
            tally.check(
                els[jn].complement() == a.complement().meet(&b.complement())?
                    && els[mt].complement() == a.complement().join(&b.complement())?,
                || format!("({i}, {j}): De Morgan fails"),
            );
            for k in 0..m {
                tally.check(
                    tables.join[jn][k] == tables.join[i][tables.join[j][k]]
                        && tables.meet[mt][k] == tables.meet[i][tables.meet[j][k]],
                    || format!("({i}, {j}, {k}): not associative"),
                );
            }
        }
    }
    let perp = SubspaceLattice::new(n, l.perp().elements().to_vec());
    tally.check(perp.is_ok(), || "complement family is not a lattice".into());
    Ok(())
}

fn phi_psi_monotone<S: Scalar>(t: &Matrix<S>, l: &SubspaceLattice<S>, tally: &mut Tally) -> Result<()> {
    let map = KernelMap::new(t, l)?;
    let els = l.elements();
    for (i, a) in els.iter().enumerate() {
        for (j, b) in els.iter().enumerate() {
            if !a.is_subspace_of(b) {
                continue;
            }
            tally.check(map.phi_at(i).is_subspace_of(map.phi_at(j)), || {
                format!("φ not monotone on {a} ≤ {b}")
            });
            tally.check(map.psi_at(j).is_subspace_of(map.psi_at(i)), || {
                format!("ψ not antitone on {a} ≤ {b}")
            });
            tally.check(map.omega_at(i).precedes(&map.omega_at(j)), || {
                format!("ω not order preserving on {a} ≤ {b}")
            });
        }
    }
    Ok(())
}

fn kernel_pair_in_bil<S: Scalar>(t: &Matrix<S>, l: &SubspaceLattice<S>, tally: &mut Tally) -> Result<()> {
    let map = KernelMap::new(t, l)?;
    let perp = l.perp();
    for (i, p) in l.elements().iter().enumerate() {
        let (phi, psi) = (map.phi_at(i), map.psi_at(i));
        tally.check(l.contains(phi), || format!("φ({p}) not in L"));
        tally.check(perp.contains(psi), || format!("ψ({p}) not in L⊥"));
        tally.check(annihilates(psi, t, phi), || format!("ω({p}) not in BIL"));
        tally.check(annihilates(&p.complement(), t, phi), || {
            format!("P⊥ T φ(P) ≠ 0 at {p}")
        });
        let back = psi.complement();
        if l.contains(&back) {
            tally.check(map.omega(&back)? == map.omega_at(i), || {
                format!("ω(ψ(P)⊥) ≠ ω(P) at {p}")
            });
        } else {
            tally.skip();
        }
    }
    Ok(())
}

fn pair_index<S: Scalar>(
    l: &SubspaceLattice<S>,
    perp: &SubspaceLattice<S>,
    pair: &BilatticePair<S>,
) -> Result<(usize, usize)> {
    Ok((l.position(&pair.p)?, perp.position(&pair.q)?))
}

fn bil_join_meet<S: Scalar>(t: &Matrix<S>, l: &SubspaceLattice<S>, tally: &mut Tally) -> Result<()> {
    let map = KernelMap::new(t, l)?;
    let b = bil(t, l)?;
    let perp = l.perp();
    let (lt, pt) = (Tables::new(l)?, Tables::new(&perp)?);
    let n = l.ambient_dim();
    let pairs = b
        .pairs
        .iter()
        .map(|pair| pair_index(l, &perp, pair))
        .collect::<Result<Vec<_>>>()?;
    let members: HashSet<(usize, usize)> = pairs.iter().copied().collect();
    let (bottom, top) = (l.position(&Subspace::zero(n))?, l.position(&Subspace::full(n))?);
    let (perp_bottom, perp_top) = (perp.position(&Subspace::zero(n))?, perp.position(&Subspace::full(n))?);

    for (i, p) in l.elements().iter().enumerate() {
        let p_perp = perp.position(&p.complement())?;
        // join of {(P', Q) ∈ BIL : P⊥ ≤ Q}
        let joined = pairs
            .iter()
            .filter(|&&(_, q)| pt.join[p_perp][q] == q)
            .fold((bottom, perp_top), |(a, c), &(x, y)| (lt.join[a][x], pt.meet[c][y]));
        let expected = (l.position(map.phi_at(i))?, p_perp);
        tally.check(joined == expected, || format!("join characterization of (φ(P), P⊥) fails at {p}"));

        // meet of {(φ(P'), P'⊥) : φ(P') = φ(P)}
        let level: Vec<(usize, usize)> = (0..l.len())
            .filter(|&j| map.phi_at(j) == map.phi_at(i))
            .map(|j| Ok((l.position(map.phi_at(j))?, perp.position(&l.elements()[j].complement())?)))
            .collect::<Result<_>>()?;
        tally.check(level.iter().all(|x| members.contains(x)), || {
            format!("level pair outside BIL at {p}")
        });
        let met = level
            .iter()
            .fold((top, perp_bottom), |(a, c), &(x, y)| (lt.meet[a][x], pt.join[c][y]));
        let expected = pair_index(l, &perp, &map.omega_at(i))?;
        tally.check(met == expected, || format!("meet characterization of ω(P) fails at {p}"));
    }
    Ok(())
}

fn bil_closure<S: Scalar>(t: &Matrix<S>, l: &SubspaceLattice<S>, tally: &mut Tally) -> Result<()> {
    let b = bil(t, l)?;
    let perp = l.perp();
    let (lt, pt) = (Tables::new(l)?, Tables::new(&perp)?);
    let members: HashSet<(usize, usize)> = b
        .pairs
        .iter()
        .map(|pair| pair_index(l, &perp, pair))
        .collect::<Result<_>>()?;

    // Oracle: Q T P = 0 through explicit projector products.
    let p_proj: Vec<Matrix<S>> = l.elements().iter().map(Subspace::projector).collect();
    let q_proj: Vec<Matrix<S>> = perp.elements().iter().map(Subspace::projector).collect();
    for (ip, pp) in p_proj.iter().enumerate() {
        let tp = t * pp;
        for (iq, qp) in q_proj.iter().enumerate() {
            let oracle = (qp * &tp).is_zero();
            tally.check(oracle == members.contains(&(ip, iq)), || {
                format!("BIL membership of ({ip}, {iq}) disagrees with projector products")
            });
        }
    }
    tally.check(b.contains_extremes(), || "extreme pairs missing".into());
    let list: Vec<(usize, usize)> = members.iter().copied().collect();
    for (k, &(p1, q1)) in list.iter().enumerate() {
        for &(p2, q2) in &list[k..] {
            tally.check(members.contains(&(lt.join[p1][p2], pt.meet[q1][q2])), || {
                "BIL not closed under join".into()
            });
            tally.check(members.contains(&(lt.meet[p1][p2], pt.join[q1][q2])), || {
                "BIL not closed under meet".into()
            });
        }
    }
    Ok(())
}

fn psi_complement_fixed<S: Scalar>(t: &Matrix<S>, nest: &Nest<S>, tally: &mut Tally) -> Result<()> {
    let l = nest.lattice();
    let map = KernelMap::new(t, l)?;
    let perp = l.perp();
    for (i, p) in l.elements().iter().enumerate() {
        let phi = map.phi_at(i);
        let mut alt = Subspace::zero(l.ambient_dim());
        for q in perp.elements().iter().filter(|q| annihilates(q, t, phi)) {
            alt = alt.join(q)?;
        }
        tally.check(alt == *map.psi_at(i), || format!("ψ({p}) differs from the annihilator join"));
        let back = map.psi_at(i).complement();
        if l.contains(&back) {
            tally.check(map.phi(&back)? == phi, || format!("φ(ψ(P)⊥) ≠ φ(P) at {p}"));
            tally.check(map.omega(&back)? == map.omega_at(i), || {
                format!("ω(ψ(P)⊥) ≠ ω(P) at {p}")
            });
        } else {
            tally.skip();
        }
    }
    Ok(())
}

fn strict_separation<S: Scalar>(t: &Matrix<S>, nest: &Nest<S>, tally: &mut Tally) -> Result<()> {
    let map = KernelMap::new(t, nest.lattice())?;
    let m = nest.len();
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = (map.omega_at(i), map.omega_at(j));
            if a == b {
                tally.skip();
                continue;
            }
            tally.check(
                a.p.is_proper_subspace_of(&b.p) && b.q.is_proper_subspace_of(&a.q),
                || format!("members {i} < {j}: kernel pairs differ without strict separation"),
            );
        }
    }
    Ok(())
}

fn kernel_set_size_bound<S: Scalar>(t: &Matrix<S>, nest: &Nest<S>, tally: &mut Tally) -> Result<()> {
    let size = KernelMap::new(t, nest.lattice())?.kernel_set().len();
    let rank = t.rank();
    tally.check(size <= rank + 1, || format!("|Ω| = {size} exceeds rank + 1 = {}", rank + 1));
    tally.tight = size == rank + 1;
    Ok(())
}

fn kernel_set_chain<S: Scalar>(t: &Matrix<S>, nest: &Nest<S>, tally: &mut Tally) -> Result<()> {
    let map = KernelMap::new(t, nest.lattice())?;
    let ks = map.kernel_set();
    tally.check(ks.is_chain(), || "kernel set is not a chain".into());
    tally.check(
        ks.entries.windows(2).all(|w| w[0].pair.precedes(&w[1].pair)),
        || "kernel set is not listed in increasing order".into(),
    );
    for i in 0..nest.len() {
        tally.check(ks.contains(&map.omega_at(i)), || format!("ω of member {i} missing"));
    }
    for e in &ks.entries {
        tally.check(map.omega(&e.source)? == e.pair, || "entry source does not map to its pair".into());
    }
    Ok(())
}

fn decomposition<S: Scalar>(t: &Matrix<S>, nest: &Nest<S>, tally: &mut Tally) -> Result<()> {
    let d = decompose(t, nest)?;
    let report = verify_decomposition(&d, nest)?;
    for c in report.checks.iter().filter(|c| c.mandatory) {
        tally.check(c.passed, || format!("{} failed {}", c.name, c.detail));
    }
    Ok(())
}

fn truncation_identity<S: Scalar>(t: &Matrix<S>, nest: &Nest<S>, s: &mut Sampler, tally: &mut Tally) -> Result<()> {
    let partition = s.partition(nest);
    let tr = truncations(&partition, t)?;
    let sum = &(&tr.upper + &tr.lower) + &tr.diagonal;
    tally.check(sum == *t, || "U + L + D ≠ T".into());
    tally.check(in_nest_algebra(&tr.upper, nest)?, || "U outside the nest algebra".into());
    tally.check(in_nest_algebra(&tr.lower.adjoint(), nest)?, || {
        "L* outside the nest algebra".into()
    });
    Ok(())
}

fn supports_round_trip<S: Scalar>(nest: &Nest<S>, s: &mut Sampler, tally: &mut Tally) -> Result<()> {
    let l = nest.lattice();
    let chain = nest.chain();
    for (ip, p) in chain.iter().enumerate() {
        for below in &chain[..ip] {
            let x = vector_with_supports(nest, p, below)?;
            tally.check(p_of_x(l, &x)? == *p, || format!("P_x ≠ {p}"));
            tally.check(p_hat_of_x(l, &x)? == *below, || format!("P̂_x ≠ {below}"));
        }
    }
    let n = nest.ambient_dim();
    for _ in 0..4 {
        let x = s.vector::<S>(n, 3);
        if x.is_zero() {
            continue;
        }
        let (px, hat) = (p_of_x(l, &x)?, p_hat_of_x(l, &x)?);
        tally.check(hat.is_proper_subspace_of(&px), || "P̂_x is not below P_x".into());
        tally.check(px.contains(&x), || "P_x x ≠ x".into());
        tally.check(hat.complement().contains(&x), || "P̂_x x ≠ 0".into());
    }
    Ok(())
}

fn distinct_supports<S: Scalar>(nest: &Nest<S>, s: &mut Sampler, tally: &mut Tally) -> Result<()> {
    let l = nest.lattice();
    let chain = nest.chain();
    let n = nest.ambient_dim();
    let mut family = Vec::new();
    for i in 1..chain.len() {
        if family.is_empty() || s.rng_bool(0.6) {
            let basis = chain[i].basis_vectors();
            let x = (0..8)
                .map(|_| s.combination(n, &basis, 5))
                .find(|x| p_of_x(l, x).is_ok_and(|p| p == chain[i]));
            let x = match x {
                Some(x) => x,
                None => vector_with_supports(nest, &chain[i], &chain[i - 1])?,
            };
            family.push(x);
        }
    }
    let supports = family
        .iter()
        .map(|x| p_of_x(l, x))
        .collect::<Result<Vec<_>>>()?;
    let distinct = supports
        .iter()
        .enumerate()
        .all(|(i, a)| supports[i + 1..].iter().all(|b| a != b));
    tally.check(distinct, || "family supports are not distinct".into());
    let rank = Matrix::from_row_vectors(n, &family)?.rank();
    tally.check(rank == family.len(), || {
        format!("{} vectors with distinct supports have rank {rank}", family.len())
    });
    Ok(())
}

fn witness<S: Scalar>(t: &Matrix<S>, nest: &Nest<S>, seed: u64, tally: &mut Tally) -> Result<()> {
    let l = nest.lattice();
    let map = KernelMap::new(t, l)?;
    for (i, p) in nest.chain().iter().enumerate() {
        match omega_witness_with(&map, p, seed, WITNESS_RETRY_BUDGET) {
            Ok(x) => {
                let tx = t.apply(&x)?;
                tally.check(
                    p_of_x(l, &x)? == *map.phi_at(i) && p_of_x(l, &tx)? == map.psi_at(i).complement(),
                    || format!("witness for member {i} does not verify"),
                );
            }
            Err(e) => tally.check(false, || format!("no witness for member {i}: {e}")),
        }
    }
    Ok(())
}

fn rank_one_membership<S: Scalar>(nest: &Nest<S>, s: &mut Sampler, tally: &mut Tally) -> Result<()> {
    let n = nest.ambient_dim();
    let chain = nest.chain();
    let algebra = nest_algebra(nest);
    for _ in 0..4 {
        let (x, y): (Vector<S>, Vector<S>) = if s.rng_bool(0.5) {
            // aligned with the nest, so usually a member
            let i = s.rng_range(1..=chain.len() - 1);
            let xs = chain[i].basis_vectors();
            let ys = chain[i - 1].complement().basis_vectors();
            (s.combination(n, &xs, 3), s.combination(n, &ys, 3))
        } else {
            (s.vector(n, 3), s.vector(n, 3))
        };
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let r = outer(&x, &y);
        let by_criterion = rank_one_in_nest_algebra(&x, &y, nest);
        tally.check(by_criterion == algebra.contains(&r)?, || {
            format!("criterion and algebra basis disagree on {x} ⊗ {y}")
        });
        match in_nest_algebra(&r, nest) {
            Ok(member) => tally.check(member == by_criterion, || "membership tests disagree".into()),
            Err(e) => tally.check(false, || e.to_string()),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    #[test]
    fn names_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert!("nope".parse::<Property>().is_err());
    }

    #[test]
    fn families_share_instances() {
        let (a, na, _) = nest_instance::<BigRational>(5, 3);
        let (b, nb, _) = nest_instance::<BigRational>(5, 3);
        assert_eq!((a, na), (b, nb));
    }

    #[test]
    fn every_property_passes_a_few_cases() {
        for p in Property::ALL {
            let summary = run_property::<BigRational>(p, 1, 6);
            assert!(summary.ok(), "{p}: {:?}", summary.failures);
            assert!(summary.checks > 0, "{p} made no checks");
        }
    }
}
