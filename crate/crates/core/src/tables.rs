//! The finite tables of low-dimensional reduction theory.
//!
//! * Tammela's reduction table: the columns `u` whose inequalities
//!   `Q(u) >= Q(e_i)` (together with `Q(e_{i+1}) >= Q(e_i)`) cut out the
//!   Minkowski-reduced domain for `n <= 6`.
//! * Tammela's relevant-vector table: with respect to a Minkowski-reduced
//!   basis, every relevant vector of the Dirichlet-Voronoi cell is a signed
//!   permutation of one of its columns.
//! * Ryskov's table of admissible centerings up to dimension six.
//!
//! A column stands for every vector obtained by permuting its coordinates and
//! changing signs. In dimension `n` only columns with at most `n` nonzero
//! entries are used.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactlin::{CoordVector, Rational};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 6;

/// Which table a column comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table {
    Reduction,
    Relevant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnSource {
    pub table: Table,
    /// One-based column number in the printed table.
    pub column: usize,
}

/// A raw table column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateColumn {
    pub coords: [u8; 6],
    pub source: ColumnSource,
}

impl CandidateColumn {
    pub fn nonzero_count(&self) -> usize {
        self.coords.iter().filter(|&&c| c != 0).count()
    }
}

/// An entry of the relevant-vector table; one column carries an undefined
/// symbol `m` in its last row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RawEntry {
    Value(u8),
    Undefined,
}

use RawEntry::{Undefined as M, Value as V};

const REDUCTION_TABLE: [[u8; 6]; 9] = [
    [1, 1, 0, 0, 0, 0],
    [1, 1, 1, 0, 0, 0],
    [1, 1, 1, 1, 0, 0],
    [1, 1, 1, 1, 1, 0],
    [1, 1, 1, 1, 2, 0],
    [1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 1, 2],
    [1, 1, 1, 1, 2, 2],
    [1, 1, 1, 1, 2, 3],
];

/// Columns of the relevant-vector table in printed order: nine columns
/// repeating the reduction table, nine in the middle part, five in the last.
const RELEVANT_TABLE: [[RawEntry; 6]; 23] = [
    [V(1), V(1), V(0), V(0), V(0), V(0)],
    [V(1), V(1), V(1), V(0), V(0), V(0)],
    [V(1), V(1), V(1), V(1), V(0), V(0)],
    [V(1), V(1), V(1), V(1), V(1), V(0)],
    [V(1), V(1), V(1), V(1), V(2), V(0)],
    [V(1), V(1), V(1), V(1), V(1), V(1)],
    [V(1), V(1), V(1), V(1), V(1), V(2)],
    [V(1), V(1), V(1), V(1), V(2), V(2)],
    [V(1), V(1), V(1), V(1), V(2), V(3)],
    // middle part
    [V(1), V(0), V(0), V(0), V(0), V(0)],
    [V(1), V(1), V(1), V(2), V(0), V(0)],
    [V(1), V(1), V(1), V(2), V(2), V(0)],
    [V(1), V(1), V(1), V(1), V(1), V(3)],
    [V(1), V(1), V(1), V(2), V(2), V(2)],
    [V(1), V(1), V(1), V(2), V(2), V(3)],
    [V(1), V(1), V(1), V(2), V(2), V(4)],
    [V(1), V(1), V(2), V(2), V(2), V(3)],
    [V(1), V(1), V(1), V(1), V(2), M],
    // last part
    [V(1), V(1), V(1), V(2), V(3), V(0)],
    [V(1), V(1), V(1), V(2), V(3), V(3)],
    [V(1), V(1), V(1), V(2), V(3), V(4)],
    [V(1), V(1), V(2), V(2), V(3), V(4)],
    [V(1), V(2), V(2), V(2), V(3), V(3)],
];

pub fn reduction_columns() -> Vec<CandidateColumn> {
    REDUCTION_TABLE
        .iter()
        .enumerate()
        .map(|(i, c)| CandidateColumn {
            coords: *c,
            source: ColumnSource {
                table: Table::Reduction,
                column: i + 1,
            },
        })
        .collect()
}

/// Raw relevant-vector table, including the column with the undefined entry.
pub fn relevant_table_raw() -> &'static [[RawEntry; 6]; 23] {
    &RELEVANT_TABLE
}

/// Usable relevant-vector columns: every column without an undefined entry.
/// The only such column, number 18 `(1,1,1,1,2,m)`, is excluded from the
/// table's statement itself.
pub fn relevant_columns() -> Vec<CandidateColumn> {
    RELEVANT_TABLE
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let mut coords = [0u8; 6];
            for (dst, e) in coords.iter_mut().zip(c) {
                match e {
                    RawEntry::Value(v) => *dst = *v,
                    RawEntry::Undefined => return None,
                }
            }
            Some(CandidateColumn {
                coords,
                source: ColumnSource {
                    table: Table::Relevant,
                    column: i + 1,
                },
            })
        })
        .collect()
}

/// Columns of the relevant-vector table that cannot be expanded.
pub fn excluded_relevant_columns() -> Vec<usize> {
    RELEVANT_TABLE
        .iter()
        .enumerate()
        .filter(|(_, c)| c.contains(&RawEntry::Undefined))
        .map(|(i, _)| i + 1)
        .collect()
}

/// A signed, permuted table column in a fixed dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedCandidate {
    /// Canonical sign: first nonzero coordinate positive.
    pub coords: CoordVector,
    /// Largest index with a nonzero coordinate.
    pub pivot_index: usize,
    /// Largest index `i` with `gcd(u_i, ..., u_n) = 1`; the candidate yields
    /// the inequality `Q(u) >= Q(e_i)` for this index.
    pub inequality_index: usize,
    /// First column (in table order) that produces this vector.
    pub source: ColumnSource,
}

impl ExpandedCandidate {
    fn new(coords: CoordVector, source: ColumnSource) -> Self {
        let pivot_index = coords.pivot_index().expect("table columns are nonzero");
        let inequality_index = coords
            .last_primitive_tail()
            .expect("table columns contain a unit entry");
        ExpandedCandidate {
            coords,
            pivot_index,
            inequality_index,
            source,
        }
    }

    fn sort_key(&self) -> (usize, i64, &CoordVector) {
        let norm: i64 = self.coords.as_slice().iter().map(|x| x * x).sum();
        (self.inequality_index, norm, &self.coords)
    }
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension {
            n,
            min: MIN_DIM,
            max: MAX_DIM,
        })
    }
}

fn next_permutation(v: &mut [i64]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// All signed permutations of the given absolute-value patterns in dimension
/// `n`, deduplicated, canonically signed and with full gcd one. Patterns with
/// more than `n` nonzero entries are skipped.
///
/// The result is ordered by (inequality index, squared coordinate norm,
/// coordinates).
pub fn expand_patterns<I>(patterns: I, n: usize) -> Vec<ExpandedCandidate>
where
    I: IntoIterator<Item = (Vec<u64>, ColumnSource)>,
{
    let mut seen: BTreeMap<CoordVector, ColumnSource> = BTreeMap::new();
    for (pattern, source) in patterns {
        let nonzero: Vec<i64> = pattern.iter().filter(|&&v| v != 0).map(|&v| v as i64).collect();
        if nonzero.is_empty() || nonzero.len() > n {
            continue;
        }
        let g = nonzero.iter().fold(0i64, |g, v| g.gcd(v));
        if g != 1 {
            continue;
        }
        let mut arrangement = nonzero.clone();
        arrangement.resize(n, 0);
        arrangement.sort_unstable();
        loop {
            let positions: Vec<usize> = (0..n).filter(|&i| arrangement[i] != 0).collect();
            // the first nonzero coordinate keeps a positive sign
            let free = positions.len() - 1;
            for mask in 0u32..(1 << free) {
                let mut v = arrangement.clone();
                for (bit, &p) in positions[1..].iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        v[p] = -v[p];
                    }
                }
                seen.entry(CoordVector::new(v)).or_insert(source);
            }
            if !next_permutation(&mut arrangement) {
                break;
            }
        }
    }
    let mut out: Vec<ExpandedCandidate> = seen.into_iter().map(|(c, s)| ExpandedCandidate::new(c, s)).collect();
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out
}

fn column_patterns(cols: Vec<CandidateColumn>) -> impl Iterator<Item = (Vec<u64>, ColumnSource)> {
    cols.into_iter()
        .map(|c| (c.coords.iter().map(|&v| v as u64).collect(), c.source))
}

type Expansions = Vec<Vec<ExpandedCandidate>>;

fn expansions(columns: fn() -> Vec<CandidateColumn>) -> Expansions {
    (0..=MAX_DIM)
        .map(|n| {
            if n < MIN_DIM {
                Vec::new()
            } else {
                expand_patterns(column_patterns(columns()), n)
            }
        })
        .collect()
}

pub(crate) fn reduction_set(n: usize) -> Result<&'static [ExpandedCandidate]> {
    static CACHE: OnceLock<Expansions> = OnceLock::new();
    check_dim(n)?;
    Ok(&CACHE.get_or_init(|| expansions(reduction_columns))[n])
}

pub(crate) fn relevant_set(n: usize) -> Result<&'static [ExpandedCandidate]> {
    static CACHE: OnceLock<Expansions> = OnceLock::new();
    check_dim(n)?;
    Ok(&CACHE.get_or_init(|| expansions(relevant_columns))[n])
}

/// Expansion of the reduction table in dimension `n`.
pub fn tammela_reduction_candidates(n: usize) -> Result<Vec<ExpandedCandidate>> {
    reduction_set(n).map(<[_]>::to_vec)
}

/// Expansion of the relevant-vector table in dimension `n`.
pub fn relevant_vector_candidates(n: usize) -> Result<Vec<ExpandedCandidate>> {
    relevant_set(n).map(<[_]>::to_vec)
}

/// One admissible centering: the sublattice spanned by a minimum basis plus
/// the points with the listed coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenteringClass {
    pub dimension: usize,
    /// Least common multiple of the denominators of the relevant rows.
    pub u: u64,
    /// Index (volume) of the centering.
    pub v: u64,
    /// Coordinates of the centering points with respect to the minimum basis,
    /// each entry in `[0, 1)`.
    pub relevant_rows: Vec<Vec<Rational>>,
}

type Row = &'static [(i64, i64)];

const H: (i64, i64) = (1, 2);
const T: (i64, i64) = (1, 3);
const Z: (i64, i64) = (0, 1);

const CENTERINGS: &[(usize, u64, u64, &[Row])] = &[
    (2, 1, 1, &[&[Z, Z]]),
    (3, 1, 1, &[&[Z, Z, Z]]),
    (4, 1, 1, &[&[Z, Z, Z, Z]]),
    (4, 2, 2, &[&[H, H, H, H]]),
    (5, 1, 1, &[&[Z, Z, Z, Z, Z]]),
    (5, 2, 2, &[&[H, H, H, H, Z]]),
    (5, 2, 2, &[&[H, H, H, H, H]]),
    (6, 1, 1, &[&[Z, Z, Z, Z, Z, Z]]),
    (6, 2, 2, &[&[H, H, H, H, Z, Z]]),
    (6, 2, 2, &[&[H, H, H, H, H, Z]]),
    (6, 2, 2, &[&[H, H, H, H, H, H]]),
    (
        6,
        2,
        4,
        &[&[H, H, H, H, Z, Z], &[H, H, Z, Z, H, H], &[Z, Z, H, H, H, H]],
    ),
    (6, 3, 3, &[&[T, T, T, T, T, T]]),
];

/// Rows of the admissible-centering table for dimension `n`.
pub fn centering_classes(n: usize) -> Result<Vec<CenteringClass>> {
    check_dim(n)?;
    Ok(CENTERINGS
        .iter()
        .filter(|(d, ..)| *d == n)
        .map(|&(dimension, u, v, rows)| CenteringClass {
            dimension,
            u,
            v,
            relevant_rows: rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
                        .collect()
                })
                .collect(),
        })
        .collect())
}

/// Largest denominator among the relevant rows of dimension `n`: the bound on
/// coordinates of minimum vectors in a Minkowski-reduced basis.
pub fn max_theorem_bound(n: usize) -> Result<u64> {
    let classes = centering_classes(n)?;
    let max = classes
        .iter()
        .flat_map(|c| c.relevant_rows.iter().flatten())
        .map(|r| r.denom().clone())
        .max()
        .unwrap_or_else(BigInt::one);
    Ok(u64::try_from(max).expect("table denominators are small"))
}

/// Text listing of both expansions for dimension `n`, one vector per line.
pub fn dump_tables(n: usize) -> Result<String> {
    let red = tammela_reduction_candidates(n)?;
    let rel = relevant_vector_candidates(n)?;
    let mut out = String::new();
    for (name, set) in [("reduction", &red), ("relevant", &rel)] {
        let _ = writeln!(out, "# {name} n={n} count={}", set.len());
        let mut lines: Vec<&ExpandedCandidate> = set.iter().collect();
        lines.sort_by(|a, b| a.coords.cmp(&b.coords));
        for c in lines {
            let coords: Vec<String> = c.coords.as_slice().iter().map(i64::to_string).collect();
            let _ = writeln!(
                out,
                "{} i={} col={}",
                coords.join(" "),
                c.inequality_index + 1,
                c.source.column
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn set(c: &[ExpandedCandidate]) -> BTreeSet<CoordVector> {
        c.iter().map(|c| c.coords.clone()).collect()
    }

    #[test]
    fn dimension_two() {
        let c = tammela_reduction_candidates(2).unwrap();
        let expected: BTreeSet<CoordVector> = [vec![1, 1], vec![1, -1]].into_iter().map(CoordVector::new).collect();
        assert_eq!(set(&c), expected);
        // the relevant table also has the unit column
        let r = relevant_vector_candidates(2).unwrap();
        let mut with_units = expected.clone();
        with_units.insert(CoordVector::new(vec![1, 0]));
        with_units.insert(CoordVector::new(vec![0, 1]));
        assert_eq!(set(&r), with_units);
    }

    #[test]
    fn dimension_three_count() {
        let c = tammela_reduction_candidates(3).unwrap();
        assert_eq!(c.len(), 10);
        assert_eq!(c.iter().filter(|c| c.coords.nonzero_count() == 2).count(), 6);
        assert_eq!(c.iter().filter(|c| c.coords.nonzero_count() == 3).count(), 4);
    }

    #[test]
    fn maxima() {
        let m = |c: Vec<ExpandedCandidate>| c.iter().map(|c| c.coords.max_abs()).max().unwrap();
        assert_eq!(m(tammela_reduction_candidates(6).unwrap()), 3);
        assert_eq!(m(tammela_reduction_candidates(5).unwrap()), 2);
        assert_eq!(m(relevant_vector_candidates(6).unwrap()), 4);
        assert_eq!(m(relevant_vector_candidates(5).unwrap()), 3);
    }

    #[test]
    fn unsupported_dimensions() {
        for n in [0, 1, 7] {
            assert!(matches!(
                tammela_reduction_candidates(n),
                Err(Error::UnsupportedDimension { .. })
            ));
            assert!(relevant_vector_candidates(n).is_err());
            assert!(centering_classes(n).is_err());
            assert!(max_theorem_bound(n).is_err());
        }
    }

    #[test]
    fn inequality_index_respects_tail_gcd() {
        let c = tammela_reduction_candidates(5).unwrap();
        let u = c.iter().find(|c| c.coords.as_slice() == [1, 1, 1, 1, 2]).unwrap();
        assert_eq!(u.pivot_index, 4);
        assert_eq!(u.inequality_index, 3);
        for c in &c {
            assert_eq!(c.coords.tail_gcd(c.inequality_index), 1);
            assert!(c.inequality_index <= c.pivot_index);
        }
    }

    #[test]
    fn excluded_column() {
        assert_eq!(excluded_relevant_columns(), vec![18]);
        assert_eq!(relevant_columns().len(), 22);
        // first part of the relevant table is the reduction table
        for (a, b) in reduction_columns().iter().zip(relevant_columns()) {
            assert_eq!(a.coords, b.coords);
        }
    }

    #[test]
    fn centering_table_rows() {
        let four = centering_classes(4).unwrap();
        assert_eq!(four.len(), 2);
        assert_eq!((four[0].u, four[0].v), (1, 1));
        assert_eq!((four[1].u, four[1].v), (2, 2));
        assert_eq!(four[1].relevant_rows, vec![vec![Rational::new(1.into(), 2.into()); 4]]);

        let six = centering_classes(6).unwrap();
        assert_eq!(six.len(), 6);
        let v4 = six.iter().find(|c| c.v == 4).unwrap();
        assert_eq!((v4.u, v4.relevant_rows.len()), (2, 3));
        let v3 = six.iter().find(|c| c.v == 3).unwrap();
        assert_eq!(v3.u, 3);
        assert_eq!(v3.relevant_rows, vec![vec![Rational::new(1.into(), 3.into()); 6]]);

        let two = centering_classes(2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!((two[0].u, two[0].v), (1, 1));
    }

    #[test]
    fn theorem_bounds() {
        let got: Vec<u64> = (2..=6).map(|n| max_theorem_bound(n).unwrap()).collect();
        assert_eq!(got, vec![1, 1, 2, 2, 3]);
    }

    #[test]
    fn centering_rows_are_consistent() {
        for n in MIN_DIM..=MAX_DIM {
            for c in centering_classes(n).unwrap() {
                let lcm = c
                    .relevant_rows
                    .iter()
                    .flatten()
                    .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                assert_eq!(lcm, BigInt::from(c.u));
                assert_eq!(c.v % c.u, 0);
                assert!(c.relevant_rows.iter().all(|r| r.len() == n));
            }
        }
    }

    #[test]
    fn permutation_stepper() {
        let mut v = vec![0, 1, 1];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
    }
}
