//! Seeded random instances.
//!
//! All randomness in the crate flows from a [`Sampler`], which wraps the
//! ChaCha8 stream cipher generator (`rand_chacha::ChaCha8Rng`) seeded with
//! a single `u64`. ChaCha8 output is specified independently of platform and
//! word size, so a seed reproduces the same instances everywhere.

use num::rational::BigRational;
use num::traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::{Nest, Partition, SubspaceLattice};
use crate::matrix::{Matrix, Vector};
use crate::scalar::{Field, Scalar};
use crate::subspace::Subspace;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Independent sampler for case `index` of a run seeded with `seed`.
    pub fn for_case(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { rng }
    }

    pub fn rng_range(&mut self, range: std::ops::RangeInclusive<usize>) -> usize {
        self.rng.gen_range(range)
    }

    pub fn rng_bool(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn integer(&mut self, bound: i64) -> i64 {
        self.rng.gen_range(-bound..=bound)
    }

    /// `p/q` with `|p| ≤ bound` and `1 ≤ q ≤ 3`; over the Gaussian
    /// rationals the imaginary part is nonzero a quarter of the time.
    pub fn rational<S: Scalar>(&mut self, bound: i64) -> S {
        let re = self.raw_rational(bound);
        let im = if S::FIELD == Field::Gaussian && self.rng.gen_bool(0.25) {
            self.raw_rational(bound)
        } else {
            BigRational::zero()
        };
        S::from_parts(re, im).expect("imaginary part only drawn over the Gaussian field")
    }

    fn raw_rational(&mut self, bound: i64) -> BigRational {
        let p = self.integer(bound);
        let q = self.rng.gen_range(1..=3);
        BigRational::new(p.into(), q.into())
    }

    fn sparse<S: Scalar>(&mut self, zero_prob: f64, bound: i64) -> S {
        if self.rng.gen_bool(zero_prob) {
            S::zero()
        } else {
            self.rational(bound)
        }
    }

    pub fn vector<S: Scalar>(&mut self, dim: usize, bound: i64) -> Vector<S> {
        Vector::new((0..dim).map(|_| self.rational(bound)).collect())
    }

    /// A vector with integer entries in `[-bound, bound]`.
    pub fn integer_vector<S: Scalar>(&mut self, dim: usize, bound: i64) -> Vector<S> {
        Vector::new((0..dim).map(|_| S::from_i64(self.integer(bound))).collect())
    }

    /// A random integer combination of `basis` (zero when `basis` is empty).
    pub fn combination<S: Scalar>(&mut self, dim: usize, basis: &[Vector<S>], bound: i64) -> Vector<S> {
        basis.iter().fold(Vector::zeros(dim), |acc, b| {
            let c = S::from_i64(self.integer(bound));
            &acc + &b.scale(&c)
        })
    }

    /// A square matrix drawn from a mix of shapes: dense, sparse, low rank,
    /// upper triangular and (rarely) zero.
    pub fn matrix<S: Scalar>(&mut self, n: usize) -> Matrix<S> {
        match self.rng.gen_range(0..20) {
            0 => Matrix::zeros(n, n),
            1..=4 => self.fill(n, n, 0.0, 2),
            5..=9 => self.fill(n, n, 0.7, 3),
            10..=15 => {
                let r = self.rng.gen_range(1..=n);
                let a = self.fill(n, r, 0.5, 3);
                let b = self.fill(r, n, 0.5, 3);
                &a * &b
            }
            _ => {
                let mut m = self.fill(n, n, 0.5, 3);
                for i in 0..n {
                    for j in 0..i {
                        m[(i, j)] = S::zero();
                    }
                }
                m
            }
        }
    }

    fn fill<S: Scalar>(&mut self, rows: usize, cols: usize, zero_prob: f64, bound: i64) -> Matrix<S> {
        let data = (0..rows * cols).map(|_| self.sparse(zero_prob, bound)).collect();
        Matrix::from_vec(rows, cols, data).expect("length matches shape")
    }

    /// A random rank-one operator `x ⊗ y` with both factors nonzero.
    pub fn rank_one<S: Scalar>(&mut self, n: usize) -> Matrix<S> {
        loop {
            let x = self.sparse_vector(n);
            let y = self.sparse_vector(n);
            if !x.is_zero() && !y.is_zero() {
                return crate::matrix::outer(&x, &y);
            }
        }
    }

    fn sparse_vector<S: Scalar>(&mut self, n: usize) -> Vector<S> {
        Vector::new((0..n).map(|_| self.sparse(0.5, 3)).collect())
    }

    /// An invertible matrix with small integer entries.
    pub fn invertible<S: Scalar>(&mut self, n: usize) -> Matrix<S> {
        loop {
            let data = (0..n * n).map(|_| S::from_i64(self.integer(2))).collect();
            let m = Matrix::from_vec(n, n, data).expect("length matches shape");
            if m.rank() == n {
                return m;
            }
        }
    }

    fn dims_subset(&mut self, n: usize) -> Vec<usize> {
        (1..n).filter(|_| self.rng.gen_bool(0.6)).collect()
    }

    /// A random nest: half the time a coordinate nest, otherwise a flag
    /// spanned by the leading columns of a random invertible matrix.
    pub fn nest<S: Scalar>(&mut self, n: usize) -> Nest<S> {
        let dims = self.dims_subset(n);
        if self.rng.gen_bool(0.5) {
            return Nest::coordinate(n, &dims).expect("dims below ambient dimension");
        }
        let cols = self.invertible::<S>(n).columns();
        let chain = dims
            .iter()
            .map(|&d| Subspace::span(n, &cols[..d]).expect("columns have ambient dimension"))
            .collect();
        Nest::new(n, chain).expect("leading column spans form a chain")
    }

    /// A random finite lattice that is typically not totally ordered.
    ///
    /// Shapes: the image of a distributive lattice of coordinate subspaces
    /// under an invertible map, or the closure of two or three random
    /// subspaces (with a three-lines-in-a-plane configuration mixed in).
    pub fn lattice<S: Scalar>(&mut self, n: usize) -> SubspaceLattice<S> {
        loop {
            let gens = match self.rng.gen_range(0..3) {
                0 => self.coordinate_generators(n),
                1 => self.subspace_generators(n),
                _ => self.plane_with_lines(n),
            };
            if let Ok(l) = SubspaceLattice::generated_by(n, gens, 40) {
                return l;
            }
        }
    }

    fn coordinate_generators<S: Scalar>(&mut self, n: usize) -> Vec<Subspace<S>> {
        let g = self.invertible::<S>(n).columns();
        let k = self.rng.gen_range(1..=3);
        (0..k)
            .map(|_| {
                let picked: Vec<_> = (0..n)
                    .filter(|_| self.rng.gen_bool(0.5))
                    .map(|i| g[i].clone())
                    .collect();
                Subspace::span(n, &picked).expect("columns have ambient dimension")
            })
            .collect()
    }

    fn subspace_generators<S: Scalar>(&mut self, n: usize) -> Vec<Subspace<S>> {
        let k = self.rng.gen_range(1..=2);
        (0..k).map(|_| self.subspace(n)).collect()
    }

    fn plane_with_lines<S: Scalar>(&mut self, n: usize) -> Vec<Subspace<S>> {
        if n < 2 {
            return self.subspace_generators(n);
        }
        let a = self.integer_vector::<S>(n, 2);
        let b = self.integer_vector::<S>(n, 2);
        let lines = [a.clone(), b.clone(), &a + &b];
        lines
            .iter()
            .map(|v| Subspace::span(n, std::slice::from_ref(v)).expect("ambient dimension"))
            .collect()
    }

    pub fn subspace<S: Scalar>(&mut self, n: usize) -> Subspace<S> {
        let d = self.rng.gen_range(0..=n);
        let vs: Vec<_> = (0..d).map(|_| self.integer_vector::<S>(n, 2)).collect();
        Subspace::span(n, &vs).expect("vectors have ambient dimension")
    }

    /// A random sub-selection of the nest's chain, keeping both ends.
    pub fn partition<'a, S: Scalar>(&mut self, nest: &'a Nest<S>) -> Partition<'a, S> {
        let top = nest.len() - 1;
        let mut indices: Vec<usize> = std::iter::once(0)
            .chain((1..top).filter(|_| self.rng.gen_bool(0.5)))
            .chain(std::iter::once(top))
            .collect();
        indices.dedup();
        Partition::new(nest, indices).expect("selection is increasing and spans the chain")
    }

    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> Option<&'a T> {
        items.choose(&mut self.rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instances() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for n in 1..6 {
            assert_eq!(a.matrix::<BigRational>(n), b.matrix::<BigRational>(n));
            assert_eq!(a.nest::<BigRational>(n), b.nest::<BigRational>(n));
        }
        assert_ne!(
            Sampler::for_case(1, 0).vector::<BigRational>(6, 9),
            Sampler::for_case(1, 1).vector::<BigRational>(6, 9)
        );
    }

    #[test]
    fn generated_lattices_are_valid() {
        let mut s = Sampler::new(3);
        for n in 1..6 {
            let l = s.lattice::<BigRational>(n);
            // re-validating through the checked constructor must succeed
            let again = SubspaceLattice::new(n, l.elements().to_vec()).unwrap();
            assert_eq!(again, l);
        }
    }
}
