//! Named lattices and the nine-dimensional Minkowski-reduced basis that is
//! not Hermite-reduced.

mod file;

pub use file::LatticeFile;

use crate::error::{Error, Result};
use crate::exactlin::{
    apply_transform, gram_from_basis, rat, CoordVector, EmbeddedBasis, GramMatrix, Matrix, Rational,
};
use crate::UnimodularTransform;

/// Coordinates of `e8* = -2e1 - (e2 + ... + e7) + 2e8 + 3e9`.
pub const E8_STAR: [i64; 9] = [-2, -1, -1, -1, -1, -1, -1, 2, 3];

/// Coordinates of `e9* = -e1 + e8 + e9`.
pub const E9_STAR: [i64; 9] = [-1, 0, 0, 0, 0, 0, 0, 1, 1];

/// The 12 × 9 matrix whose columns span the nine-dimensional example, all of
/// squared length 1.
pub fn example9_embedded() -> EmbeddedBasis {
    let h = rat(1, 2);
    let t = rat(1, 3);
    let mut m: Matrix<Rational> = Matrix::zeros(12, 9);
    m[(0, 0)] = h.clone();
    m[(0, 7)] = h.clone();
    for r in 1..4 {
        m[(r, 0)] = h.clone();
        m[(r, 8)] = t.clone();
    }
    for (r, c) in [(4, 1), (5, 2)] {
        m[(r, c)] = rat(1, 1);
        m[(r, 7)] = h.clone();
    }
    for (r, c) in [(6, 3), (7, 4), (8, 5), (9, 6)] {
        m[(r, c)] = rat(1, 1);
        m[(r, 8)] = t.clone();
    }
    m[(10, 8)] = t.clone();
    m[(11, 7)] = -h;
    m[(11, 8)] = t;
    EmbeddedBasis::new(m).expect("columns are independent")
}

/// Gram matrix of the columns of [`example9_embedded`].
pub fn example9_gram() -> GramMatrix {
    gram_from_basis(&example9_embedded()).expect("positive definite")
}

/// Basis `e1, ..., e7, e8*, e9*` of the example lattice.
pub fn example9_mnh_transform() -> UnimodularTransform {
    let mut cols: Vec<CoordVector> = (0..7).map(|i| CoordVector::unit(9, i)).collect();
    cols.push(CoordVector::from(&E8_STAR[..]));
    cols.push(CoordVector::from(&E9_STAR[..]));
    UnimodularTransform::from_columns(&cols).expect("unimodular")
}

/// Gram matrix of the basis `e1, ..., e7, e8*, e9*`: Minkowski-reduced but
/// not Hermite-reduced.
pub fn example9_reduced_not_hermite() -> GramMatrix {
    apply_transform(&example9_gram(), &example9_mnh_transform()).expect("square transform")
}

fn from_embedded(cols: Vec<Vec<Rational>>) -> GramMatrix {
    let basis = EmbeddedBasis::new(Matrix::from_cols(&cols)).expect("independent");
    gram_from_basis(&basis).expect("positive definite")
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|j| rat(i64::from(i == j), 1)).collect()
}

fn cartan_e6() -> GramMatrix {
    // nodes 1-3-4-5-6 in a chain, node 2 attached to node 4
    let edges = [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)];
    let mut rows = vec![vec![0i64; 6]; 6];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        rows[a][b] = -1;
        rows[b][a] = -1;
    }
    GramMatrix::from_integer_rows(&rows).expect("positive definite")
}

/// Registry names: `Z<n>`, `A<n>`, `D<n>` (n >= 3), `E6`, `D4-centered-cubic`,
/// `example9` and `example9-mnh`.
pub fn named_lattice(name: &str) -> Result<GramMatrix> {
    let unknown = || Error::UnknownLattice(name.to_string());
    match name {
        "E6" => return Ok(cartan_e6()),
        "D4-centered-cubic" => {
            let mut cols: Vec<Vec<Rational>> = (0..3).map(|i| unit(4, i)).collect();
            cols.push(vec![rat(1, 2); 4]);
            return Ok(from_embedded(cols));
        }
        "example9" => return Ok(example9_gram()),
        "example9-mnh" => return Ok(example9_reduced_not_hermite()),
        _ => {}
    }
    let (kind, n) = name.split_at(1.min(name.len()));
    let n: usize = n.parse().map_err(|_| unknown())?;
    if n == 0 || n > 64 {
        return Err(unknown());
    }
    match kind {
        "Z" => Ok(GramMatrix::identity(n)),
        "A" => {
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { 2 } else { 1 }).collect())
                .collect();
            Ok(GramMatrix::from_integer_rows(&rows).expect("positive definite"))
        }
        "D" if n >= 3 => {
            // e_i - e_{i+1} for i < n, and e_{n-1} + e_n
            let mut cols: Vec<Vec<Rational>> = (0..n - 1)
                .map(|i| {
                    let mut c = unit(n, i);
                    c[i + 1] = rat(-1, 1);
                    c
                })
                .collect();
            let mut last = unit(n, n - 1);
            last[n - 2] = rat(1, 1);
            cols.push(last);
            Ok(from_embedded(cols))
        }
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{lattice_minimum, Enumerator};
    use crate::exactlin::int;

    #[test]
    fn example9_columns() {
        let e = example9_embedded();
        assert_eq!((e.ambient_dim(), e.rank()), (12, 9));
        let c1 = e.columns().col(0);
        assert_eq!(&c1[..4], &[rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)]);
        assert!(c1[4..].iter().all(|x| *x == int(0)));
        let g = example9_gram();
        assert!(g.diagonal().iter().all(|d| *d == int(1)));
        assert_eq!(*g.entry(0, 7), rat(1, 4));
        assert_eq!(*g.entry(0, 8), rat(1, 2));
        assert_eq!(*g.entry(7, 8), rat(-1, 6));
    }

    #[test]
    fn example9_gram_by_hand() {
        let g = example9_gram();
        let mut expected = Matrix::identity(9).map(|v: &i64| int(*v));
        let mut set = |i: usize, j: usize, v: Rational| {
            expected[(i, j)] = v.clone();
            expected[(j, i)] = v;
        };
        set(0, 7, rat(1, 4));
        set(0, 8, rat(1, 2));
        set(7, 8, rat(-1, 6));
        set(1, 7, rat(1, 2));
        set(2, 7, rat(1, 2));
        for i in 3..7 {
            set(i, 8, rat(1, 3));
        }
        assert_eq!(g.entries(), &expected);
    }

    #[test]
    fn example9_minimum_includes_the_columns() {
        let (min, list) = lattice_minimum(&example9_gram()).unwrap();
        assert_eq!(min, int(1));
        for i in 0..9 {
            assert!(list.coords().any(|v| *v == CoordVector::unit(9, i)));
        }
    }

    #[test]
    fn mnh_diagonal() {
        let g = example9_reduced_not_hermite();
        let d = g.diagonal();
        assert!(d[..8].iter().all(|x| *x == int(1)));
        assert_eq!(d[8], rat(7, 6));
        assert_eq!(example9_gram().value(&E8_STAR), int(1));
        assert_eq!(example9_gram().value(&E9_STAR), rat(7, 6));
    }

    #[test]
    fn named() {
        assert_eq!(named_lattice("Z4").unwrap(), GramMatrix::identity(4));
        let a2 = named_lattice("A2").unwrap();
        assert_eq!(a2, GramMatrix::from_integer_rows(&[vec![2, 1], vec![1, 2]]).unwrap());
        let (m, list) = lattice_minimum(&a2).unwrap();
        assert_eq!((m, 2 * list.len()), (int(2), 6));
        assert_eq!(named_lattice("A4").unwrap().determinant(), int(5));
        assert_eq!(named_lattice("D5").unwrap().determinant(), int(4));
        assert_eq!(named_lattice("E6").unwrap().determinant(), int(3));
        let (_, e6) = Enumerator::new(&named_lattice("E6").unwrap()).minimum().unwrap();
        assert_eq!(2 * e6.len(), 72);
        let d4c = named_lattice("D4-centered-cubic").unwrap();
        assert_eq!(d4c.determinant(), rat(1, 4));
        assert!(named_lattice("Q3").is_err());
        assert!(named_lattice("D2").is_err());
        assert!(named_lattice("").is_err());
    }
}
