//! Centerings of a lattice over a full-rank sublattice, classification
//! against the admissible-centering table, and the coordinate-bound check for
//! minimum vectors.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::enumeration::Enumerator;
use crate::error::{Error, Result};
use crate::exactlin::{
    determinant_int, inverse, lattice_basis, lcm_of_denominators, smith_with_inverses, to_i64, CoordVector, GramMatrix,
    Matrix, Rational,
};
use crate::reduction::is_minkowski_reduced_table;
use crate::tables::{centering_classes, max_theorem_bound, CenteringClass, MAX_DIM, MIN_DIM};

type Point = Vec<Rational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenteringData {
    pub index_v: BigInt,
    /// The `V - 1` nonzero cosets, as coordinates in `[0, 1)` with respect to
    /// the sublattice basis, sorted.
    pub coset_reps: Vec<Point>,
    pub denominator_u: BigInt,
}

fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

fn columns(vectors: &[CoordVector]) -> Result<Matrix<BigInt>> {
    let n = vectors.len();
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    let cols: Vec<Vec<BigInt>> = vectors.iter().map(CoordVector::to_bigints).collect();
    Ok(Matrix::from_cols(&cols))
}

/// Quotient of `Z^n` (the ambient lattice in its own basis) by the span of
/// `sub_basis`.
pub fn centering_data(sub_basis: &[CoordVector]) -> Result<CenteringData> {
    let n = sub_basis.len();
    let a = columns(sub_basis)?;
    let det = determinant_int(&a);
    if det.is_zero() {
        return Err(Error::LinearlyDependent {
            rank: crate::exactlin::rank_int(&a),
            expected: n,
        });
    }
    // left · A · right = D, so the point left⁻¹·k has sublattice coordinates right · D⁻¹ · k
    let smith = smith_with_inverses(&a).form;
    let d = &smith.divisors;
    let mut reps = BTreeSet::new();
    let mut k = vec![BigInt::zero(); n];
    loop {
        if k.iter().any(|v| !v.is_zero()) {
            let y: Point = (0..n)
                .map(|i| {
                    let s: Rational = (0..n)
                        .map(|j| Rational::new(&smith.right[(i, j)] * &k[j], d[j].clone()))
                        .sum();
                    frac(&s)
                })
                .collect();
            reps.insert(y);
        }
        let mut i = 0;
        while i < n {
            k[i] += 1;
            if k[i] < d[i] {
                break;
            }
            k[i] = BigInt::zero();
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let coset_reps: Vec<Point> = reps.into_iter().collect();
    let denominator_u = lcm_of_denominators(coset_reps.iter().flatten());
    Ok(CenteringData {
        index_v: det.abs(),
        coset_reps,
        denominator_u,
    })
}

/// Sublattice basis, in coordinates of the lattice generated by `Z^n` and the
/// given rows, whose centering points are the rows.
pub fn sub_basis_for_rows(n: usize, rows: &[Point]) -> Result<Vec<CoordVector>> {
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: r.len(),
        });
    }
    let u = Rational::from_integer(lcm_of_denominators(rows.iter().flatten()));
    let scaled = |r: &Rational| (r * &u).to_integer();
    let mut gens: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { u.to_integer() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    gens.extend(rows.iter().map(|r| r.iter().map(scaled).collect()));
    let b = lattice_basis(&Matrix::from_cols(&gens));
    let b_inv = inverse(&b.map(|v| Rational::from_integer(v.clone()))).expect("full rank");
    (0..n)
        .map(|j| {
            let c: Vec<i64> = (0..n)
                .map(|i| to_i64(&(&b_inv[(i, j)] * &u).to_integer()))
                .collect::<Result<_>>()?;
            Ok(CoordVector::new(c))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Class(CenteringClass),
    /// Not a row group of the table (for instance not an admissible centering
    /// of a minimum parallelepiped).
    Unknown,
}

impl Classification {
    pub fn class(&self) -> Option<&CenteringClass> {
        match self {
            Classification::Class(c) => Some(c),
            Classification::Unknown => None,
        }
    }
}

/// Nonzero elements of the subgroup of `(Q/Z)^n` generated by `rows`.
fn generated_group(rows: &[Point], n: usize) -> BTreeSet<Point> {
    let zero: Point = vec![Rational::zero(); n];
    let mut group: BTreeSet<Point> = BTreeSet::from([zero.clone()]);
    let mut frontier = vec![zero.clone()];
    while let Some(p) = frontier.pop() {
        for r in rows {
            let s: Point = p.iter().zip(r).map(|(a, b)| frac(&(a + b))).collect();
            if group.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    group.remove(&zero);
    group
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Whether some permutation and sign change of the coordinates maps `a` onto `b`.
fn equivalent(a: &BTreeSet<Point>, b: &BTreeSet<Point>, n: usize) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        for signs in 0u32..(1 << n) {
            let image = a.iter().all(|p| {
                let q: Point = (0..n)
                    .map(|i| {
                        let x = &p[perm[i]];
                        if signs >> i & 1 == 1 {
                            frac(&-x)
                        } else {
                            x.clone()
                        }
                    })
                    .collect();
                b.contains(&q)
            });
            if image {
                return true;
            }
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

/// Matches the centering group against the table classes of dimension `n`,
/// up to permuting and negating the sublattice basis vectors.
pub fn classify_centering(data: &CenteringData, n: usize) -> Classification {
    let Ok(classes) = centering_classes(n) else {
        return Classification::Unknown;
    };
    if data.coset_reps.iter().any(|r| r.len() != n) {
        return Classification::Unknown;
    }
    let ours: BTreeSet<Point> = data.coset_reps.iter().cloned().collect();
    classes
        .into_iter()
        .find(|c| {
            BigInt::from(c.v) == data.index_v
                && BigInt::from(c.u) == data.denominator_u
                && equivalent(&ours, &generated_group(&c.relevant_rows, n), n)
        })
        .map_or(Classification::Unknown, Classification::Class)
}

/// A nonzero coset point with every coordinate `0` or `1/2`: the centre of a
/// face of the basis parallelepiped.
pub fn half_centered_face(data: &CenteringData) -> Option<&Point> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    data.coset_reps
        .iter()
        .find(|r| r.iter().all(|x| x.is_zero() || *x == half))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub dimension: usize,
    pub trials: usize,
    pub max_abs_coordinate_seen: u64,
    pub bound: u64,
    /// Minimum vectors with a coordinate above the bound.
    pub counterexamples: Vec<CoordVector>,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// Combines the reports of two batches of the same dimension.
    pub fn merge(mut self, other: TheoremReport) -> TheoremReport {
        debug_assert_eq!(self.dimension, other.dimension);
        self.trials += other.trials;
        self.max_abs_coordinate_seen = self.max_abs_coordinate_seen.max(other.max_abs_coordinate_seen);
        self.counterexamples.extend(other.counterexamples);
        self
    }

    pub fn empty(dimension: usize) -> Result<TheoremReport> {
        Ok(TheoremReport {
            dimension,
            trials: 0,
            max_abs_coordinate_seen: 0,
            bound: max_theorem_bound(dimension)?,
            counterexamples: Vec::new(),
        })
    }
}

/// Checks the coordinates of all minimum vectors of a reduced form against
/// the bound for its dimension.
pub fn check_theorem_bound(g: &GramMatrix) -> Result<TheoremReport> {
    let n = g.dim();
    if !(MIN_DIM..=MAX_DIM).contains(&n) {
        return Err(Error::UnsupportedDimension {
            n,
            min: MIN_DIM,
            max: MAX_DIM,
        });
    }
    if let Some(v) = is_minkowski_reduced_table(g)?.violation() {
        return Err(Error::NotReduced(v.to_string()));
    }
    let mut report = TheoremReport::empty(n)?;
    report.trials = 1;
    let (_, minima) = Enumerator::new(g).minimum()?;
    for v in minima.coords() {
        let m = v.max_abs();
        report.max_abs_coordinate_seen = report.max_abs_coordinate_seen.max(m);
        if m > report.bound {
            report.counterexamples.push(v.clone());
        }
    }
    Ok(report)
}

pub fn index_is_even(data: &CenteringData) -> bool {
    data.index_v.is_even()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    fn cv(v: &[i64]) -> CoordVector {
        CoordVector::from(v)
    }

    /// Units, then `m·e_n - (e_1 + ... + e_k)`: the point `(1/m)(a_1 + ... + a_k + a_n)` is `e_n`.
    fn spiked(n: usize, k: usize, m: i64) -> Vec<CoordVector> {
        let mut basis: Vec<CoordVector> = (0..n - 1).map(|i| CoordVector::unit(n, i)).collect();
        let mut last = vec![0; n];
        for x in last.iter_mut().take(k) {
            *x = -1;
        }
        last[n - 1] = m;
        basis.push(CoordVector::new(last));
        basis
    }

    #[test]
    fn trivial_centering() {
        let data = centering_data(&(0..5).map(|i| CoordVector::unit(5, i)).collect::<Vec<_>>()).unwrap();
        assert_eq!(data.index_v, BigInt::one());
        assert!(data.coset_reps.is_empty());
        assert_eq!(data.denominator_u, BigInt::one());
        let c = classify_centering(&data, 5);
        assert_eq!(c.class().map(|c| (c.u, c.v)), Some((1, 1)));
    }

    #[test]
    fn half_sum_in_dimension_four() {
        let data = centering_data(&spiked(4, 3, 2)).unwrap();
        assert_eq!(data.index_v, BigInt::from(2));
        assert_eq!(data.coset_reps, vec![vec![rat(1, 2); 4]]);
        assert_eq!(data.denominator_u, BigInt::from(2));
        let c = classify_centering(&data, 4);
        assert_eq!(c.class().unwrap().relevant_rows, vec![vec![rat(1, 2); 4]]);
    }

    #[test]
    fn third_sum_in_dimension_six() {
        let data = centering_data(&spiked(6, 5, 3)).unwrap();
        assert_eq!(data.coset_reps, vec![vec![rat(1, 3); 6], vec![rat(2, 3); 6]]);
        let c = classify_centering(&data, 6);
        assert_eq!(c.class().map(|c| (c.u, c.v)), Some((3, 3)));
    }

    #[test]
    fn index_four_block() {
        let class = centering_classes(6).unwrap().into_iter().find(|c| c.v == 4).unwrap();
        let basis = sub_basis_for_rows(6, &class.relevant_rows).unwrap();
        let data = centering_data(&basis).unwrap();
        assert_eq!(data.index_v, BigInt::from(4));
        assert_eq!(data.coset_reps.len(), 3);
        assert_eq!(classify_centering(&data, 6), Classification::Class(class));
    }

    #[test]
    fn two_halves_is_not_in_the_table() {
        let rows = vec![vec![rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1)]];
        let data = centering_data(&sub_basis_for_rows(6, &rows).unwrap()).unwrap();
        assert_eq!(data.coset_reps, rows);
        assert_eq!(classify_centering(&data, 6), Classification::Unknown);
    }

    #[test]
    fn classification_ignores_basis_order_and_signs() {
        let mut basis = spiked(5, 4, 2);
        basis.rotate_left(2);
        basis[1] = basis[1].neg();
        let data = centering_data(&basis).unwrap();
        let c = classify_centering(&data, 5).class().cloned().unwrap();
        assert_eq!(c.relevant_rows, vec![vec![rat(1, 2); 5]]);
    }

    #[test]
    fn rows_round_trip() {
        for n in 2..=6 {
            for class in centering_classes(n).unwrap() {
                let rows: Vec<Point> = class
                    .relevant_rows
                    .iter()
                    .filter(|r| r.iter().any(|x| !x.is_zero()))
                    .cloned()
                    .collect();
                let data = centering_data(&sub_basis_for_rows(n, &rows).unwrap()).unwrap();
                assert_eq!(data.index_v, BigInt::from(class.v));
                assert_eq!(classify_centering(&data, n), Classification::Class(class));
            }
        }
    }

    #[test]
    fn index_from_determinant() {
        // e1..e7, -2e1 - (e2 + ... + e7) + 2e8 + 3e9, and 3e9
        let mut basis: Vec<CoordVector> = (0..7).map(|i| CoordVector::unit(9, i)).collect();
        basis.push(cv(&[-2, -1, -1, -1, -1, -1, -1, 2, 3]));
        basis.push(cv(&[0, 0, 0, 0, 0, 0, 0, 0, 3]));
        let data = centering_data(&basis).unwrap();
        assert_eq!(data.index_v, BigInt::from(6));
        assert_eq!(data.coset_reps.len(), 5);
        assert!(data.index_v.is_multiple_of(&data.denominator_u));
        assert_eq!(classify_centering(&data, 9), Classification::Unknown);
    }

    #[test]
    fn dependent_sub_basis() {
        assert!(matches!(
            centering_data(&[cv(&[1, 2]), cv(&[2, 4])]),
            Err(Error::LinearlyDependent { .. })
        ));
    }

    #[test]
    fn half_face_forces_even_index() {
        let data = centering_data(&spiked(6, 3, 2)).unwrap();
        assert!(half_centered_face(&data).is_some());
        assert!(index_is_even(&data));
        let data = centering_data(&spiked(6, 5, 3)).unwrap();
        assert!(half_centered_face(&data).is_none());
    }

    #[test]
    fn theorem_bound_on_identity() {
        let r = check_theorem_bound(&GramMatrix::identity(6)).unwrap();
        assert_eq!((r.max_abs_coordinate_seen, r.bound), (1, 3));
        assert!(r.holds());
        let skew = GramMatrix::from_integer_rows(&[vec![4, 3], vec![3, 5]]).unwrap();
        assert!(matches!(check_theorem_bound(&skew), Err(Error::NotReduced(_))));
    }
}
