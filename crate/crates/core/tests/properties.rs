use std::collections::BTreeSet;

use minkowski::centering::centering_data;
use minkowski::corpus::LatticeFile;
use minkowski::enumeration::{enumerate_short_vectors, lattice_minimum, successive_minima};
use minkowski::exactlin::{apply_transform, determinant_int, inverse, Matrix};
use minkowski::reduction::{
    is_minkowski_reduced_definitional, is_minkowski_reduced_table, lll_reduce, minkowski_reduce,
};
use minkowski::tables::{expand_patterns, relevant_vector_candidates, tammela_reduction_candidates};
use minkowski::voronoi::relevant_vectors;
use minkowski::{CoordVector, GramMatrix, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn form(max_dim: usize, r: i64) -> impl Strategy<Value = GramMatrix> {
    (2..=max_dim)
        .prop_flat_map(move |n| proptest::collection::vec(-r..=r, n * n).prop_map(move |e| (n, e)))
        .prop_filter_map("singular", |(n, e)| {
            let b = Matrix::from_fn(n, n, |i, j| Rational::from_integer(e[i * n + j].into()));
            GramMatrix::new(b.transpose().mul(&b)).ok()
        })
}

/// Every canonical `x` with `Q(x) <= bound`, from the box `x_i^2 <= bound · (G⁻¹)_ii`.
fn brute_short(g: &GramMatrix, bound: &Rational) -> BTreeSet<CoordVector> {
    let n = g.dim();
    let inv = inverse(g.entries()).unwrap();
    let radius: Vec<i64> = (0..n)
        .map(|i| {
            let cap = bound * &inv[(i, i)];
            (0..)
                .find(|r: &i64| Rational::from_integer((r + 1).pow(2).into()) > cap)
                .unwrap()
        })
        .collect();
    let mut out = BTreeSet::new();
    let mut x: Vec<i64> = radius.iter().map(|r| -r).collect();
    loop {
        let v = CoordVector::new(x.clone());
        if !v.is_zero() && v.is_canonical() && g.value(&x) <= *bound {
            out.insert(v);
        }
        let mut i = 0;
        while i < n && x[i] == radius[i] {
            x[i] = -radius[i];
            i += 1;
        }
        if i == n {
            return out;
        }
        x[i] += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_exact_and_idempotent(g in form(5, 3)) {
        let rep = minkowski_reduce(&g).unwrap();
        let red = &rep.reduced_gram;
        prop_assert_eq!(red.determinant(), g.determinant());
        prop_assert_eq!(&apply_transform(&g, &rep.transform).unwrap(), red);
        prop_assert!(is_minkowski_reduced_table(red).unwrap().is_reduced());
        prop_assert!(is_minkowski_reduced_definitional(red).unwrap().is_reduced());
        let again = minkowski_reduce(red).unwrap();
        prop_assert!(again.transform.is_identity());
        prop_assert_eq!(&again.reduced_gram, red);
    }

    #[test]
    fn reduced_diagonal_is_the_successive_minima(g in form(4, 3)) {
        let red = minkowski_reduce(&g).unwrap().reduced_gram;
        let sm = successive_minima(&g).unwrap();
        prop_assert_eq!(sm.norms, red.diagonal());
        prop_assert_eq!(&lattice_minimum(&g).unwrap().0, red.diag(0));
    }

    #[test]
    fn table_and_definition_agree(g in form(5, 2)) {
        let t = is_minkowski_reduced_table(&g).unwrap();
        let d = is_minkowski_reduced_definitional(&g).unwrap();
        prop_assert_eq!(t.is_reduced(), d.is_reduced());
        if let Some(v) = t.violation() {
            prop_assert!(v.q_u < v.q_ei);
            prop_assert_eq!(v.u.tail_gcd(v.index), 1);
        }
    }

    #[test]
    fn enumeration_matches_a_box(g in form(4, 2)) {
        let bound = g.max_diagonal();
        let listed: BTreeSet<CoordVector> =
            enumerate_short_vectors(&g, &bound).unwrap().coords().cloned().collect();
        prop_assert_eq!(listed, brute_short(&g, &bound));
    }

    #[test]
    fn lll_keeps_the_lattice(g in form(5, 4)) {
        let rep = lll_reduce(&g, &Rational::new(3.into(), 4.into())).unwrap();
        prop_assert_eq!(rep.reduced_gram.determinant(), g.determinant());
        prop_assert_eq!(apply_transform(&g, &rep.transform).unwrap(), rep.reduced_gram);
    }

    #[test]
    fn relevant_pairs_are_bounded(g in form(4, 3)) {
        let n = g.dim();
        let set = relevant_vectors(&g).unwrap();
        prop_assert!(set.pair_count() >= n && set.pair_count() < 1 << n);
        for v in lattice_minimum(&g).unwrap().1.coords() {
            prop_assert!(set.contains(v));
        }
    }

    #[test]
    fn lattice_files_round_trip(g in form(5, 3)) {
        let f = LatticeFile::Gram(g.clone());
        let back = LatticeFile::parse(&f.to_text()).unwrap();
        prop_assert_eq!(back.gram().unwrap(), g);
    }

    #[test]
    fn index_is_a_multiple_of_the_denominator(
        e in (2usize..=5).prop_flat_map(|n| proptest::collection::vec(-2i64..=2, n * n).prop_map(move |e| (n, e)))
    ) {
        let (n, e) = e;
        let basis: Vec<CoordVector> = (0..n).map(|j| CoordVector::new(e[j * n..(j + 1) * n].to_vec())).collect();
        let m = Matrix::from_cols(&basis.iter().map(CoordVector::to_bigints).collect::<Vec<_>>());
        let det = determinant_int(&m);
        prop_assume!(!det.is_zero() && det.abs() <= BigInt::from(300));
        let data = centering_data(&basis).unwrap();
        prop_assert_eq!(&data.index_v, &det.abs());
        prop_assert!((&data.index_v % &data.denominator_u).is_zero());
        prop_assert_eq!(BigInt::from(data.coset_reps.len() + 1), data.index_v);
    }
}

#[test]
fn expansion_is_idempotent() {
    for n in 2..=6 {
        for cands in [
            tammela_reduction_candidates(n).unwrap(),
            relevant_vector_candidates(n).unwrap(),
        ] {
            let coords: BTreeSet<CoordVector> = cands.iter().map(|c| c.coords.clone()).collect();
            let again: BTreeSet<CoordVector> =
                expand_patterns(cands.iter().map(|c| (c.coords.abs_profile(), c.source)), n)
                    .into_iter()
                    .map(|c| c.coords)
                    .collect();
            assert_eq!(coords, again, "n = {n}");
        }
    }
}

#[test]
fn expansion_grows_with_dimension() {
    for n in 2..6 {
        let big: BTreeSet<CoordVector> = tammela_reduction_candidates(n + 1)
            .unwrap()
            .into_iter()
            .map(|c| c.coords)
            .collect();
        for c in tammela_reduction_candidates(n).unwrap() {
            assert!(
                big.contains(&c.coords.extended(n + 1)),
                "{:?} in n = {}",
                c.coords,
                n + 1
            );
        }
    }
}
