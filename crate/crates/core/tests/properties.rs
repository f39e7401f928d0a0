use kernelmap::kernel::kernel_set;
use kernelmap::liemod::{in_nest_algebra, nest_algebra};
use kernelmap::{outer, BigRational, GaussianRational, Matrix, Nest, Scalar, Subspace, Vector};
use num::traits::Zero;
use proptest::prelude::*;

type Q = BigRational;

fn int_matrix(max_n: usize) -> impl Strategy<Value = Matrix<Q>> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
            Matrix::from_vec(n, n, v.into_iter().map(Q::from_i64).collect()).unwrap()
        })
    })
}

fn gaussian(bound: i64) -> impl Strategy<Value = GaussianRational> {
    (-bound..=bound, -bound..=bound, 1i64..=3)
        .prop_map(|(a, b, d)| GaussianRational::new(Q::new(a.into(), d.into()), Q::from_i64(b)))
}

/// Up to four random vectors in dimension `n` spanning a subspace.
fn subspace(n: usize) -> impl Strategy<Value = Subspace<Q>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, n), 0..=4)
        .prop_map(move |rows| {
            let vs: Vec<Vector<Q>> = rows.iter().map(|r| Vector::from_i64(r)).collect();
            Subspace::span(n, &vs).unwrap()
        })
}

fn coordinate_nest(n: usize) -> impl Strategy<Value = Nest<Q>> {
    prop::collection::vec(any::<bool>(), n.saturating_sub(1)).prop_map(move |keep| {
        let dims: Vec<usize> = (1..n).filter(|d| keep[d - 1]).collect();
        Nest::coordinate(n, &dims).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_agrees_with_pivots_and_factors(m in int_matrix(6)) {
        let n = m.rows();
        let factors = m.rank_factorize();
        prop_assert_eq!(m.rank(), m.rref().pivots.len());
        prop_assert_eq!(m.rank(), factors.len());
        let sum = factors.iter().fold(Matrix::zeros(n, n), |acc, (x, y)| &acc + &outer(x, y));
        prop_assert_eq!(sum, m.clone());
        prop_assert_eq!(m.rank(), m.adjoint().rank());
    }

    #[test]
    fn projectors_are_orthogonal_and_canonical(s in (1usize..=6).prop_flat_map(subspace)) {
        let p = s.projector();
        prop_assert_eq!(&p * &p, p.clone());
        prop_assert_eq!(p.adjoint(), p.clone());
        prop_assert_eq!(Subspace::of_projector(&p).unwrap(), s.clone());
        prop_assert_eq!(Subspace::range(&p), s.clone());
        prop_assert_eq!(s.complement().complement(), s.clone());
        prop_assert_eq!(&p + &s.complement_projector(), Matrix::identity(s.ambient_dim()));
    }

    #[test]
    fn join_meet_laws((a, b) in (1usize..=6).prop_flat_map(|n| (subspace(n), subspace(n)))) {
        let j = a.join(&b).unwrap();
        let m = a.meet(&b).unwrap();
        prop_assert_eq!(j.dim() + m.dim(), a.dim() + b.dim());
        prop_assert!(a.is_subspace_of(&j) && m.is_subspace_of(&b));
        prop_assert_eq!(j.complement(), a.complement().meet(&b.complement()).unwrap());
        prop_assert_eq!(m.complement(), a.complement().join(&b.complement()).unwrap());
        prop_assert_eq!(a.join(&a.meet(&b).unwrap()).unwrap(), a.clone());
    }

    #[test]
    fn outer_is_rank_one_and_sesquilinear(
        x in prop::collection::vec(gaussian(3), 3),
        y in prop::collection::vec(gaussian(3), 3),
        c in gaussian(3),
    ) {
        let (x, y) = (Vector::new(x), Vector::new(y));
        prop_assume!(!x.is_zero() && !y.is_zero() && !c.is_zero());
        prop_assert_eq!(outer(&x, &y).rank(), 1);
        prop_assert_eq!(outer(&x.scale(&c), &y), outer(&x, &y).scale(&c));
        prop_assert_eq!(outer(&x, &y.scale(&c)), outer(&x, &y).scale(&c.conj()));
    }

    #[test]
    fn gaussian_strings_round_trip(z in gaussian(50)) {
        prop_assert_eq!(GaussianRational::parse(&z.to_string()).unwrap(), z);
    }

    #[test]
    fn nest_algebra_membership_agrees((m, nest) in (1usize..=5).prop_flat_map(|n| {
        let mat = prop::collection::vec(-2i64..=2, n * n)
            .prop_map(move |v| Matrix::from_vec(n, n, v.into_iter().map(Q::from_i64).collect()).unwrap());
        (mat, coordinate_nest(n))
    })) {
        let algebra = nest_algebra(&nest);
        prop_assert_eq!(in_nest_algebra(&m, &nest).unwrap(), algebra.contains(&m).unwrap());
    }

    #[test]
    fn kernel_set_size_bound_on_coordinate_nests((m, nest) in (1usize..=5).prop_flat_map(|n| {
        let mat = prop::collection::vec(-2i64..=2, n * n)
            .prop_map(move |v| Matrix::from_vec(n, n, v.into_iter().map(Q::from_i64).collect()).unwrap());
        (mat, coordinate_nest(n))
    })) {
        let ks = kernel_set(&m, nest.lattice()).unwrap();
        prop_assert!(ks.len() <= m.rank() + 1);
        prop_assert!(ks.is_chain());
    }
}
