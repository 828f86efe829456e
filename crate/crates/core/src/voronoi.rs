//! Relevant vectors of the Dirichlet-Voronoi cell.
//!
//! A nonzero lattice vector is relevant exactly when it and its negative are
//! the only shortest vectors of their class in `L / 2L` (Voronoi's criterion).
//! There are at most `2^n - 1` relevant pairs.

use std::collections::BTreeSet;

use crate::enumeration::Enumerator;
use crate::error::{Error, Result};
use crate::exactlin::{CoordVector, GramMatrix, Rational};
use crate::reduction::is_minkowski_reduced_table;
use crate::tables::relevant_set;

pub const MAX_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelevantVectorSet {
    /// One vector per `±` pair, canonical sign, sorted by norm then coordinates.
    pub vectors: Vec<(CoordVector, Rational)>,
}

impl RelevantVectorSet {
    pub fn pair_count(&self) -> usize {
        self.vectors.len()
    }

    /// Number of relevant vectors counted with sign.
    pub fn signed_count(&self) -> usize {
        2 * self.vectors.len()
    }

    pub fn contains(&self, v: &CoordVector) -> bool {
        let c = v.canonical();
        self.vectors.iter().any(|(u, _)| *u == c)
    }
}

pub fn relevant_vectors(g: &GramMatrix) -> Result<RelevantVectorSet> {
    let n = g.dim();
    if n == 0 || n > MAX_DIM {
        return Err(Error::UnsupportedDimension {
            n,
            min: 1,
            max: MAX_DIM,
        });
    }
    let en = Enumerator::new(g);
    let mut vectors = Vec::new();
    for mask in 1u32..(1 << n) {
        let class: Vec<i64> = (0..n).map(|i| i64::from((mask >> i) & 1)).collect();
        let (q, minima) = en.class_minimum(2, &class)?;
        if let [v] = minima.as_slice() {
            vectors.push((v.clone(), q));
        }
    }
    vectors.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(RelevantVectorSet { vectors })
}

/// Whether every minimal vector is relevant.
pub fn certify_minima_relevant(g: &GramMatrix) -> Result<bool> {
    let relevant = relevant_vectors(g)?;
    let (_, minima) = Enumerator::new(g).minimum()?;
    let all = minima.coords().all(|v| relevant.contains(v));
    Ok(all)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub relevant: RelevantVectorSet,
    /// Largest absolute coordinate over all relevant vectors.
    pub max_abs_coordinate: u64,
    /// Relevant vectors whose absolute coordinates match no table column.
    pub mismatches: Vec<CoordVector>,
}

impl MembershipReport {
    pub fn all_match(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the relevant vectors of a reduced form with the relevant-vector
/// table, as multisets of absolute coordinates.
pub fn check_table4_membership(g: &GramMatrix) -> Result<MembershipReport> {
    let n = g.dim();
    let patterns: BTreeSet<Vec<u64>> = relevant_set(n)?.iter().map(|c| c.coords.abs_profile()).collect();
    if let Some(v) = is_minkowski_reduced_table(g)?.violation() {
        return Err(Error::NotReduced(v.to_string()));
    }
    let relevant = relevant_vectors(g)?;
    let mismatches = relevant
        .vectors
        .iter()
        .filter(|(v, _)| !patterns.contains(&v.abs_profile()))
        .map(|(v, _)| v.clone())
        .collect();
    let max_abs_coordinate = relevant.vectors.iter().map(|(v, _)| v.max_abs()).max().unwrap_or(0);
    Ok(MembershipReport {
        relevant,
        max_abs_coordinate,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{apply_transform, int, UnimodularTransform};

    fn g(rows: &[&[i64]]) -> GramMatrix {
        GramMatrix::from_integer_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn cv(v: &[i64]) -> CoordVector {
        CoordVector::from(v)
    }

    /// Brute-force Voronoi criterion over a coordinate box.
    fn brute_relevant(form: &GramMatrix, r: i64) -> BTreeSet<CoordVector> {
        let n = form.dim();
        let mut classes: std::collections::BTreeMap<Vec<i64>, Vec<(Rational, CoordVector)>> = Default::default();
        let mut x = vec![-r; n];
        loop {
            let v = CoordVector::new(x.clone());
            if !v.is_zero() && v.is_canonical() {
                let key: Vec<i64> = x.iter().map(|c| c.rem_euclid(2)).collect();
                if key.iter().any(|&k| k != 0) {
                    classes.entry(key).or_default().push((form.value(&x), v));
                }
            }
            let mut i = 0;
            while i < n && x[i] == r {
                x[i] = -r;
                i += 1;
            }
            if i == n {
                break;
            }
            x[i] += 1;
        }
        classes
            .into_values()
            .filter_map(|mut c| {
                c.sort();
                (c.len() == 1 || c[0].0 < c[1].0).then(|| c[0].1.clone())
            })
            .collect()
    }

    #[test]
    fn cubic_lattices() {
        for n in 1..=6 {
            let r = relevant_vectors(&GramMatrix::identity(n)).unwrap();
            assert_eq!(r.pair_count(), n);
            assert!(r.vectors.iter().all(|(v, q)| v.nonzero_count() == 1 && *q == int(1)));
        }
    }

    #[test]
    fn hexagonal() {
        let a2 = g(&[&[2, 1], &[1, 2]]);
        let r = relevant_vectors(&a2).unwrap();
        assert_eq!(r.pair_count(), 3);
        assert!(r.vectors.iter().all(|(_, q)| *q == int(2)));
        assert!(certify_minima_relevant(&a2).unwrap());
    }

    #[test]
    fn matches_brute_force() {
        let forms = [
            g(&[&[3, 1], &[1, 4]]),
            g(&[&[5, 2, -1], &[2, 6, 3], &[-1, 3, 7]]),
            g(&[&[4, 1, 0, 1], &[1, 5, 2, 0], &[0, 2, 6, -2], &[1, 0, -2, 7]]),
        ];
        for f in &forms {
            let r = relevant_vectors(f).unwrap();
            let got: BTreeSet<CoordVector> = r.vectors.iter().map(|(v, _)| v.clone()).collect();
            assert_eq!(got, brute_relevant(f, 4));
        }
    }

    #[test]
    fn basis_change_maps_relevant_vectors() {
        let f = g(&[&[5, 2, -1], &[2, 6, 3], &[-1, 3, 7]]);
        let t = UnimodularTransform::from_columns(&[cv(&[1, 0, 0]), cv(&[2, 1, 0]), cv(&[-1, 3, 1])]).unwrap();
        let h = apply_transform(&f, &t).unwrap();
        let rf: BTreeSet<CoordVector> = relevant_vectors(&f)
            .unwrap()
            .vectors
            .into_iter()
            .map(|(v, _)| v)
            .collect();
        // a vector with coordinates y in the new basis is T·y in the old one
        let rh: BTreeSet<CoordVector> = relevant_vectors(&h)
            .unwrap()
            .vectors
            .into_iter()
            .map(|(v, _)| t.map(&v).unwrap().canonical())
            .collect();
        assert_eq!(rf, rh);
    }

    #[test]
    fn membership() {
        let r = check_table4_membership(&GramMatrix::identity(6)).unwrap();
        assert!(r.all_match());
        assert_eq!(r.max_abs_coordinate, 1);
        assert!(matches!(
            check_table4_membership(&g(&[&[4, 3], &[3, 5]])),
            Err(Error::NotReduced(_))
        ));
        assert!(relevant_vectors(&GramMatrix::identity(9)).is_err());
    }
}
