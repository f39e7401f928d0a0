//! Bilattices of an operator, the kernel map and the kernel set.
//!
//! For an operator `T` and a finite lattice `L`:
//!
//! * `BIL(T, L)` is the set of pairs `(P, Q) ∈ L × L⊥` with `QTP = 0`,
//!   ordered by `(P₁, Q₁) ⪯ (P₂, Q₂)` iff `P₁ ≤ P₂` and `Q₂ ≤ Q₁`;
//! * `φ(P) = ∨{P' ∈ L : P⊥ T P' = 0}`, the largest member `T` maps into `P`;
//! * `ψ(P) = ∨{P'⊥ : φ(P') = φ(P)}`;
//! * `ω(P) = (φ(P), ψ(P))` is the kernel map and its image `Ω` the kernel
//!   set.
//!
//! All joins and meets over defining sets are taken by exhaustive
//! enumeration of the lattice.

use crate::error::{check_dim, Error, Result};
use crate::lattice::{p_of_x, Nest, SubspaceLattice};
use crate::matrix::{Matrix, Vector};
use crate::random::Sampler;
use crate::scalar::Scalar;
use crate::subspace::{annihilates, Subspace};

/// Default number of seeded random candidates tried by [`omega_witness`]
/// after the deterministic candidates.
pub const WITNESS_RETRY_BUDGET: usize = 32;

/// A pair `(P, Q)` with `P ∈ L` and `Q ∈ L⊥`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BilatticePair<S> {
    pub p: Subspace<S>,
    pub q: Subspace<S>,
}

impl<S: Scalar> BilatticePair<S> {
    pub fn new(p: Subspace<S>, q: Subspace<S>) -> Self {
        Self { p, q }
    }

    /// `self ⪯ other`.
    pub fn precedes(&self, other: &Self) -> bool {
        self.p.is_subspace_of(&other.p) && other.q.is_subspace_of(&self.q)
    }

    /// `(P₁ ∨ P₂, Q₁ ∧ Q₂)`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.p.join(&other.p)?, self.q.meet(&other.q)?))
    }

    /// `(P₁ ∧ P₂, Q₁ ∨ Q₂)`.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.p.meet(&other.p)?, self.q.join(&other.q)?))
    }

    /// `Q·T·P = 0`.
    pub fn annihilates(&self, t: &Matrix<S>) -> bool {
        annihilates(&self.q, t, &self.p)
    }
}

/// `BIL(T, L)`, fully enumerated.
#[derive(Clone, Debug)]
pub struct Bil<S> {
    pub lattice: SubspaceLattice<S>,
    pub operator: Matrix<S>,
    pub pairs: Vec<BilatticePair<S>>,
}

impl<S: Scalar> Bil<S> {
    pub fn contains(&self, pair: &BilatticePair<S>) -> bool {
        self.pairs.contains(pair)
    }

    /// Closure under pair join and meet.
    pub fn is_closed(&self) -> Result<bool> {
        for (i, a) in self.pairs.iter().enumerate() {
            for b in &self.pairs[i..] {
                if !self.contains(&a.join(b)?) || !self.contains(&a.meet(b)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Contains `(0, 0)`, `(0, I)` and `(I, 0)`.
    pub fn contains_extremes(&self) -> bool {
        let n = self.lattice.ambient_dim();
        let (zero, full) = (Subspace::zero(n), Subspace::full(n));
        [
            BilatticePair::new(zero.clone(), zero.clone()),
            BilatticePair::new(zero.clone(), full.clone()),
            BilatticePair::new(full, zero),
        ]
        .iter()
        .all(|p| self.contains(p))
    }

    /// Join of a family of pairs; `(0, I)` for the empty family.
    pub fn join_all<'a>(&self, pairs: impl IntoIterator<Item = &'a BilatticePair<S>>) -> Result<BilatticePair<S>> {
        let n = self.lattice.ambient_dim();
        pairs
            .into_iter()
            .try_fold(BilatticePair::new(Subspace::zero(n), Subspace::full(n)), |acc, p| acc.join(p))
    }

    /// Meet of a family of pairs; `(I, 0)` for the empty family.
    pub fn meet_all<'a>(&self, pairs: impl IntoIterator<Item = &'a BilatticePair<S>>) -> Result<BilatticePair<S>> {
        let n = self.lattice.ambient_dim();
        pairs
            .into_iter()
            .try_fold(BilatticePair::new(Subspace::full(n), Subspace::zero(n)), |acc, p| acc.meet(p))
    }
}

fn check_operator<S: Scalar>(t: &Matrix<S>, lattice: &SubspaceLattice<S>) -> Result<()> {
    if !t.is_square() {
        return Err(Error::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    check_dim(lattice.ambient_dim(), t.rows())
}

/// Enumerates `BIL(T, L)`, ordered by the `L` index then the `L⊥` index.
pub fn bil<S: Scalar>(t: &Matrix<S>, lattice: &SubspaceLattice<S>) -> Result<Bil<S>> {
    let map = KernelMap::new(t, lattice)?;
    let mut pairs = Vec::new();
    for (ip, p) in lattice.elements().iter().enumerate() {
        for (iq, q) in map.perp.iter().enumerate() {
            if map.ann[iq][ip] {
                pairs.push(BilatticePair::new(p.clone(), q.clone()));
            }
        }
    }
    Ok(Bil {
        lattice: lattice.clone(),
        operator: t.clone(),
        pairs,
    })
}

/// The kernel map of `T` relative to `L`, tabulated over every member.
#[derive(Clone, Debug)]
pub struct KernelMap<'a, S> {
    lattice: &'a SubspaceLattice<S>,
    operator: &'a Matrix<S>,
    /// `perp[i] = L[i]⊥`
    perp: Vec<Subspace<S>>,
    /// `ann[i][j]`: `L[i]⊥ · T · L[j] = 0`
    ann: Vec<Vec<bool>>,
    /// `L[phi[i]] = φ(L[i])`
    phi: Vec<usize>,
    psi: Vec<Subspace<S>>,
}

impl<'a, S: Scalar> KernelMap<'a, S> {
    pub fn new(t: &'a Matrix<S>, lattice: &'a SubspaceLattice<S>) -> Result<Self> {
        check_operator(t, lattice)?;
        let els = lattice.elements();
        let perp: Vec<_> = els.iter().map(Subspace::complement).collect();
        let ann: Vec<Vec<bool>> = perp
            .iter()
            .map(|q| els.iter().map(|p| annihilates(q, t, p)).collect())
            .collect();

        let n = lattice.ambient_dim();
        let mut phi = Vec::with_capacity(els.len());
        for row in &ann {
            let mut acc = Subspace::zero(n);
            for (p, _) in els.iter().zip(row).filter(|(_, &a)| a) {
                acc = acc.join(p)?;
            }
            phi.push(lattice.position(&acc)?);
        }

        let mut psi = Vec::with_capacity(els.len());
        for &level in &phi {
            let mut acc = Subspace::zero(n);
            for (q, _) in perp.iter().zip(&phi).filter(|(_, &f)| f == level) {
                acc = acc.join(q)?;
            }
            psi.push(acc);
        }

        Ok(Self {
            lattice,
            operator: t,
            perp,
            ann,
            phi,
            psi,
        })
    }

    pub fn lattice(&self) -> &'a SubspaceLattice<S> {
        self.lattice
    }

    pub fn operator(&self) -> &'a Matrix<S> {
        self.operator
    }

    fn index(&self, p: &Subspace<S>) -> Result<usize> {
        self.lattice.position(p)
    }

    pub fn phi_at(&self, i: usize) -> &Subspace<S> {
        &self.lattice.elements()[self.phi[i]]
    }

    pub fn psi_at(&self, i: usize) -> &Subspace<S> {
        &self.psi[i]
    }

    pub fn omega_at(&self, i: usize) -> BilatticePair<S> {
        BilatticePair::new(self.phi_at(i).clone(), self.psi_at(i).clone())
    }

    pub fn phi(&self, p: &Subspace<S>) -> Result<&Subspace<S>> {
        Ok(self.phi_at(self.index(p)?))
    }

    pub fn psi(&self, p: &Subspace<S>) -> Result<&Subspace<S>> {
        Ok(self.psi_at(self.index(p)?))
    }

    pub fn omega(&self, p: &Subspace<S>) -> Result<BilatticePair<S>> {
        Ok(self.omega_at(self.index(p)?))
    }

    /// `σ(P) = ∨{P' ∈ L : φ(P') = φ(P)}`.
    pub fn sigma(&self, p: &Subspace<S>) -> Result<Subspace<S>> {
        let level = self.phi[self.index(p)?];
        let mut acc = Subspace::zero(self.lattice.ambient_dim());
        for (q, _) in self
            .lattice
            .elements()
            .iter()
            .zip(&self.phi)
            .filter(|(_, &f)| f == level)
        {
            acc = acc.join(q)?;
        }
        Ok(acc)
    }

    /// `BIL(T, L)` membership of `(L[p], L[q]⊥)` from the precomputed table.
    pub fn in_bil(&self, p: usize, q_perp_of: usize) -> bool {
        self.ann[q_perp_of][p]
    }

    /// The kernel set, one entry per distinct pair with its first source.
    pub fn kernel_set(&self) -> KernelSet<S> {
        let mut entries: Vec<KernelSetEntry<S>> = Vec::new();
        for (i, source) in self.lattice.elements().iter().enumerate() {
            let pair = self.omega_at(i);
            if !entries.iter().any(|e| e.pair == pair) {
                entries.push(KernelSetEntry {
                    source: source.clone(),
                    pair,
                });
            }
        }
        let totally_ordered = self.lattice.is_totally_ordered();
        if totally_ordered {
            let n = self.lattice.ambient_dim();
            entries.sort_by_key(|e| (e.pair.p.dim(), n - e.pair.q.dim()));
        }
        KernelSet {
            entries,
            nest: totally_ordered,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSetEntry<S> {
    pub source: Subspace<S>,
    pub pair: BilatticePair<S>,
}

/// `Ω = {ω(P) : P ∈ L}`, sorted by `⪯` when `L` is a nest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSet<S> {
    pub entries: Vec<KernelSetEntry<S>>,
    nest: bool,
}

impl<S: Scalar> KernelSet<S> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = &BilatticePair<S>> {
        self.entries.iter().map(|e| &e.pair)
    }

    pub fn contains(&self, pair: &BilatticePair<S>) -> bool {
        self.pairs().any(|p| p == pair)
    }

    /// Whether the source lattice was a nest (entries are then `⪯`-sorted).
    pub fn over_nest(&self) -> bool {
        self.nest
    }

    /// Every two entries are `⪯`-comparable.
    pub fn is_chain(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, a)| {
            self.entries[i + 1..]
                .iter()
                .all(|b| a.pair.precedes(&b.pair) || b.pair.precedes(&a.pair))
        })
    }
}

pub fn phi<S: Scalar>(t: &Matrix<S>, lattice: &SubspaceLattice<S>, p: &Subspace<S>) -> Result<Subspace<S>> {
    KernelMap::new(t, lattice)?.phi(p).cloned()
}

pub fn psi<S: Scalar>(t: &Matrix<S>, lattice: &SubspaceLattice<S>, p: &Subspace<S>) -> Result<Subspace<S>> {
    KernelMap::new(t, lattice)?.psi(p).cloned()
}

pub fn omega<S: Scalar>(t: &Matrix<S>, lattice: &SubspaceLattice<S>, p: &Subspace<S>) -> Result<BilatticePair<S>> {
    KernelMap::new(t, lattice)?.omega(p)
}

pub fn kernel_set<S: Scalar>(t: &Matrix<S>, lattice: &SubspaceLattice<S>) -> Result<KernelSet<S>> {
    Ok(KernelMap::new(t, lattice)?.kernel_set())
}

pub fn sigma<S: Scalar>(t: &Matrix<S>, nest: &Nest<S>, p: &Subspace<S>) -> Result<Subspace<S>> {
    KernelMap::new(t, nest.lattice())?.sigma(p)
}

/// Finds `x` with `P_x = φ(P)` and `P_{Tx} = ψ(P)⊥`.
///
/// Candidates: each canonical basis row of `φ(P)`, their sum, then
/// `budget` seeded random integer combinations. Every candidate is checked
/// exactly before it is returned.
pub fn omega_witness<S: Scalar>(
    t: &Matrix<S>,
    nest: &Nest<S>,
    p: &Subspace<S>,
    seed: u64,
    budget: usize,
) -> Result<Vector<S>> {
    let map = KernelMap::new(t, nest.lattice())?;
    omega_witness_with(&map, p, seed, budget)
}

pub fn omega_witness_with<S: Scalar>(
    map: &KernelMap<'_, S>,
    p: &Subspace<S>,
    seed: u64,
    budget: usize,
) -> Result<Vector<S>> {
    let lattice = map.lattice();
    if !lattice.is_totally_ordered() {
        return Err(Error::InvalidNest("witness search requires a nest".into()));
    }
    let n = lattice.ambient_dim();
    let target_x = map.phi(p)?.clone();
    let target_tx = map.psi(p)?.complement();
    let basis = target_x.basis_vectors();

    let verify = |x: &Vector<S>| -> Result<bool> {
        Ok(p_of_x(lattice, x)? == target_x && p_of_x(lattice, &map.operator().apply(x)?)? == target_tx)
    };

    let sum = basis.iter().fold(Vector::zeros(n), |acc, b| &acc + b);
    let mut attempts = 0;
    for x in basis.iter().cloned().chain(std::iter::once(sum)) {
        attempts += 1;
        if verify(&x)? {
            return Ok(x);
        }
    }
    let mut sampler = Sampler::new(seed);
    for _ in 0..budget {
        attempts += 1;
        let x = sampler.combination(n, &basis, 1000);
        if verify(&x)? {
            return Ok(x);
        }
    }
    Err(Error::SearchExhausted { attempts })
}
