use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{determinant_int, to_i64, CoordVector, GramMatrix, Matrix, Rational};
use crate::error::{Error, Result};

/// Integer matrix of determinant ±1. Column `j` holds the coordinates of the
/// `j`-th new basis vector in terms of the old basis.
#[derive(Clone, PartialEq, Eq)]
pub struct UnimodularTransform {
    entries: Matrix<BigInt>,
}

impl UnimodularTransform {
    pub fn new(entries: Matrix<BigInt>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NotSquare {
                rows: entries.rows(),
                cols: entries.cols(),
            });
        }
        let det = determinant_int(&entries);
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular {
                det: Rational::from_integer(det),
            });
        }
        Ok(UnimodularTransform { entries })
    }

    pub(crate) fn new_unchecked(entries: Matrix<BigInt>) -> Self {
        debug_assert!(determinant_int(&entries).abs().is_one());
        UnimodularTransform { entries }
    }

    pub fn identity(n: usize) -> Self {
        UnimodularTransform {
            entries: Matrix::identity(n),
        }
    }

    /// Transform whose columns are the given coordinate vectors.
    pub fn from_columns(cols: &[CoordVector]) -> Result<Self> {
        let c: Vec<Vec<BigInt>> = cols.iter().map(CoordVector::to_bigints).collect();
        Self::new(Matrix::from_cols(&c))
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Matrix<BigInt> {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.entries == Matrix::identity(self.dim())
    }

    pub fn determinant(&self) -> BigInt {
        determinant_int(&self.entries)
    }

    /// `self · other`: apply `self` first, then `other` in the new basis.
    pub fn then(&self, other: &UnimodularTransform) -> UnimodularTransform {
        UnimodularTransform {
            entries: self.entries.mul(&other.entries),
        }
    }

    pub fn inverse(&self) -> UnimodularTransform {
        let r = self.entries.map(|v| Rational::from_integer(v.clone()));
        let inv = super::inverse(&r).expect("unimodular matrices are invertible");
        UnimodularTransform {
            entries: inv.map(|v| v.to_integer()),
        }
    }

    pub fn column(&self, j: usize) -> Result<CoordVector> {
        let c: Result<Vec<i64>> = (0..self.dim()).map(|i| to_i64(&self.entries[(i, j)])).collect();
        c.map(CoordVector::new)
    }

    /// Old-basis coordinates `T · x` of a vector with new-basis coordinates `x`.
    pub fn map(&self, x: &CoordVector) -> Result<CoordVector> {
        let b = x.to_bigints();
        let v: Result<Vec<i64>> = self.entries.mul_vec(&b).iter().map(to_i64).collect();
        v.map(CoordVector::new)
    }
}

impl fmt::Display for UnimodularTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.entries, f)
    }
}

impl fmt::Debug for UnimodularTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.entries, f)
    }
}

/// `TᵀGT`: the form in the basis described by `T`.
pub fn apply_transform(g: &GramMatrix, t: &UnimodularTransform) -> Result<GramMatrix> {
    if t.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: t.dim(),
        });
    }
    let det = t.determinant();
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular {
            det: Rational::from_integer(det),
        });
    }
    Ok(apply_unchecked(g, t.entries()))
}

pub(crate) fn apply_unchecked(g: &GramMatrix, t: &Matrix<BigInt>) -> GramMatrix {
    let n = g.dim();
    let gt = g.scaled().mul(t);
    let mut out = Matrix::<BigInt>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = BigInt::zero();
            for k in 0..n {
                if !t[(k, i)].is_zero() {
                    acc += &t[(k, i)] * &gt[(k, j)];
                }
            }
            out[(j, i)] = acc.clone();
            out[(i, j)] = acc;
        }
    }
    GramMatrix::from_scaled(out, g.denom().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: &[&[i64]]) -> UnimodularTransform {
        UnimodularTransform::new(Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        ))
        .unwrap()
    }

    fn g(rows: &[&[i64]]) -> GramMatrix {
        GramMatrix::from_integer_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_is_noop() {
        let form = g(&[&[4, 3], &[3, 5]]);
        assert_eq!(apply_transform(&form, &UnimodularTransform::identity(2)).unwrap(), form);
    }

    #[test]
    fn sign_flip_changes_off_diagonal_only() {
        let form = g(&[&[2, 1, 0], &[1, 3, -1], &[0, -1, 4]]);
        let flipped = apply_transform(&form, &t(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]])).unwrap();
        assert_eq!(flipped, g(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]));
    }

    #[test]
    fn hand_expanded_change_of_basis() {
        // (e1, e2) -> (e1 - e2, e1)
        let form = g(&[&[4, 3], &[3, 5]]);
        let out = apply_transform(&form, &t(&[&[1, 1], &[-1, 0]])).unwrap();
        assert_eq!(out, g(&[&[3, 1], &[1, 4]]));
    }

    #[test]
    fn rejects_non_unimodular() {
        let m = Matrix::from_rows(vec![
            vec![BigInt::from(2), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(1)],
        ]);
        assert!(matches!(UnimodularTransform::new(m), Err(Error::NotUnimodular { .. })));
    }

    #[test]
    fn inverse_and_composition() {
        let a = t(&[&[2, 1], &[1, 1]]);
        assert!(a.then(&a.inverse()).is_identity());
        let x = CoordVector::new(vec![1, -1]);
        assert_eq!(a.map(&x).unwrap(), CoordVector::new(vec![1, 0]));
    }
}
