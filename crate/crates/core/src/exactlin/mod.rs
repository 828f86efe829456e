//! Exact rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers and rationals;
//! there is no floating point anywhere in the crate's decision paths.

mod gram;
mod matrix;
mod snf;
mod transform;
mod vector;

pub use gram::{gram_from_basis, EmbeddedBasis, GramMatrix};
pub use matrix::Matrix;
pub use snf::{lattice_basis, smith_normal_form, unimodular_with_first_column, SmithForm};
pub use transform::{apply_transform, UnimodularTransform};
pub use vector::CoordVector;

pub(crate) use gram::Scaled;
pub(crate) use snf::smith_with_inverses;
pub(crate) use transform::apply_unchecked;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p`, `-p` or `p/q` with `q != 0`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let parse_int = |t: &str| -> Option<BigInt> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        t.parse().ok()
    };
    match s.split_once('/') {
        None => parse_int(s).map(Rational::from_integer),
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
    }
}

/// Nearest integer to `a / b` for `b > 0`, halves rounded up.
pub fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * two))
}

pub(crate) fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub(crate) fn to_i64(v: &BigInt) -> Result<i64> {
    v.to_i64().ok_or(Error::CoordinateOverflow)
}

/// Determinant of a square integer matrix by Bareiss fraction-free elimination.
pub fn determinant_int(m: &Matrix<BigInt>) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

/// Scales each row to integers; returns the integer matrix and the product of the scales.
fn integer_rows(m: &Matrix<Rational>) -> (Matrix<BigInt>, BigInt) {
    let mut scale = BigInt::one();
    let scales: Vec<BigInt> = (0..m.rows()).map(|i| lcm_of_denominators(m.row(i))).collect();
    for s in &scales {
        scale *= s;
    }
    let scaled = Matrix::from_fn(m.rows(), m.cols(), |i, j| {
        let v = &m[(i, j)] * Rational::from_integer(scales[i].clone());
        v.to_integer()
    });
    (scaled, scale)
}

/// Exact determinant of a square rational matrix.
///
/// Rows are cleared of denominators first so that the elimination runs on
/// integers.
pub fn determinant(m: &Matrix<Rational>) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let (scaled, scale) = integer_rows(m);
    Ok(Rational::new(determinant_int(&scaled), scale))
}

/// Rank of an integer matrix.
pub fn rank_int(m: &Matrix<BigInt>) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, rank);
        for i in rank + 1..rows {
            if a[(i, c)].is_zero() {
                continue;
            }
            let (pv, iv) = (a[(rank, c)].clone(), a[(i, c)].clone());
            for j in c..cols {
                let v = &a[(i, j)] * &pv - &a[(rank, j)] * &iv;
                a[(i, j)] = v;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn rank(m: &Matrix<Rational>) -> usize {
    rank_int(&integer_rows(m).0)
}

/// Exact inverse by Gauss-Jordan elimination; `None` when singular.
pub fn inverse(m: &Matrix<Rational>) -> Option<Matrix<Rational>> {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = Matrix::<Rational>::identity(n);
    for c in 0..n {
        let p = (c..n).find(|&i| !a[(i, c)].is_zero())?;
        a.swap_rows(p, c);
        inv.swap_rows(p, c);
        let pivot = a[(c, c)].clone();
        for j in 0..n {
            a[(c, j)] /= &pivot;
            inv[(c, j)] /= &pivot;
        }
        for i in 0..n {
            if i == c || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in 0..n {
                let t = &f * &a[(c, j)];
                a[(i, j)] -= t;
                let t = &f * &inv[(c, j)];
                inv[(i, j)] -= t;
            }
        }
    }
    Some(inv)
}

/// `L · diag(D) · Lᵀ` factorisation of a symmetric matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ldl {
    /// Unit lower triangular factor.
    pub l: Matrix<Rational>,
    pub d: Vec<Rational>,
}

impl Ldl {
    /// Index of the first pivot that is not strictly positive.
    pub fn first_nonpositive_pivot(&self) -> Option<usize> {
        self.d.iter().position(|d| !d.is_positive())
    }

    pub fn recompose(&self) -> Matrix<Rational> {
        let n = self.d.len();
        Matrix::from_fn(n, n, |i, j| {
            let mut acc = Rational::zero();
            for k in 0..=i.min(j) {
                acc += &self.l[(i, k)] * &self.d[k] * &self.l[(j, k)];
            }
            acc
        })
    }
}

pub(crate) fn check_symmetric<T: PartialEq>(m: &Matrix<T>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    for i in 0..m.rows() {
        for j in i + 1..m.cols() {
            if m[(i, j)] != m[(j, i)] {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Exact LDLᵀ decomposition.
///
/// Every pivot is returned, including non-positive ones. When a pivot is zero
/// the entries of `L` below it are set to zero, so the factorisation only
/// recomposes exactly when all pivots are nonzero.
pub fn ldl_decompose(m: &Matrix<Rational>) -> Result<Ldl> {
    check_symmetric(m)?;
    let n = m.rows();
    let mut l = Matrix::<Rational>::identity(n);
    let mut d: Vec<Rational> = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = m[(j, j)].clone();
        for k in 0..j {
            dj -= &l[(j, k)] * &l[(j, k)] * &d[k];
        }
        for i in j + 1..n {
            let mut v = m[(i, j)].clone();
            for k in 0..j {
                v -= &l[(i, k)] * &l[(j, k)] * &d[k];
            }
            l[(i, j)] = if dj.is_zero() { Rational::zero() } else { v / &dj };
        }
        d.push(dj);
    }
    Ok(Ldl { l, d })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    #[test]
    fn ldl_of_identity_and_a2() {
        let ldl = ldl_decompose(&rm(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(ldl.l, Matrix::identity(2));
        assert_eq!(ldl.d, vec![int(1), int(1)]);

        let ldl = ldl_decompose(&rm(&[&[2, 1], &[1, 2]])).unwrap();
        assert_eq!(ldl.l[(1, 0)], rat(1, 2));
        assert_eq!(ldl.l[(0, 1)], int(0));
        assert_eq!(ldl.d, vec![int(2), rat(3, 2)]);
    }

    #[test]
    fn ldl_rejects_asymmetric() {
        let err = ldl_decompose(&rm(&[&[1, 2], &[0, 1]])).unwrap_err();
        assert_eq!(err, Error::NotSymmetric { row: 0, col: 1 });
    }

    #[test]
    fn ldl_reports_indefinite_pivots() {
        let ldl = ldl_decompose(&rm(&[&[1, 2], &[2, 1]])).unwrap();
        assert_eq!(ldl.d, vec![int(1), int(-3)]);
        assert_eq!(ldl.first_nonpositive_pivot(), Some(1));
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&Matrix::identity(5)).unwrap(), int(1));
        assert_eq!(determinant(&rm(&[&[2, 0], &[0, 2]])).unwrap(), int(4));
        assert_eq!(determinant(&rm(&[&[2, 1], &[1, 2]])).unwrap(), int(3));
        let m = Matrix::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), int(1)]]);
        assert_eq!(determinant(&m).unwrap(), rat(1, 2) - rat(1, 12));
        assert_eq!(determinant(&rm(&[&[0, 1], &[1, 0]])).unwrap(), int(-1));
        assert_eq!(determinant(&rm(&[&[1, 2], &[2, 4]])).unwrap(), int(0));
        assert!(determinant(&Matrix::<Rational>::zeros(2, 3)).is_err());
    }

    #[test]
    fn rank_and_inverse() {
        assert_eq!(rank(&rm(&[&[1, 2, 3], &[2, 4, 6]])), 1);
        assert_eq!(rank(&rm(&[&[1, 2], &[3, 4], &[5, 6]])), 2);
        let m = rm(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(inverse(&rm(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn parsing_rationals() {
        assert_eq!(parse_rational("3"), Some(int(3)));
        assert_eq!(parse_rational("-1/3"), Some(rat(-1, 3)));
        assert_eq!(parse_rational("4/6"), Some(rat(2, 3)));
        assert_eq!(parse_rational("1/-2"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(parse_rational("1.5"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn rounding() {
        let r = |a: i64, b: i64| round_div(&BigInt::from(a), &BigInt::from(b));
        assert_eq!(r(3, 4), BigInt::from(1));
        assert_eq!(r(1, 2), BigInt::from(1));
        assert_eq!(r(-1, 2), BigInt::from(0));
        assert_eq!(r(-3, 4), BigInt::from(-1));
        assert_eq!(r(7, 3), BigInt::from(2));
    }
}
