use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Matrix;
use crate::error::{Error, Result};

/// Smith normal form `left · M · right = diag(divisors)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonnegative, each dividing the next; zeros (rank deficit) come last.
    pub divisors: Vec<BigInt>,
    pub left: Matrix<BigInt>,
    pub right: Matrix<BigInt>,
}

/// Smith form together with the inverses of both transforms.
pub(crate) struct SmithFull {
    pub form: SmithForm,
    pub left_inv: Matrix<BigInt>,
    pub right_inv: Matrix<BigInt>,
}

struct Work {
    a: Matrix<BigInt>,
    left: Matrix<BigInt>,
    left_inv: Matrix<BigInt>,
    right: Matrix<BigInt>,
    right_inv: Matrix<BigInt>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.left.swap_rows(i, j);
        self.left_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.right.swap_cols(i, j);
        self.right_inv.swap_rows(i, j);
    }

    /// row_i += q · row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        add_row(&mut self.a, i, j, q);
        add_row(&mut self.left, i, j, q);
        add_col(&mut self.left_inv, j, i, &-q);
    }

    /// col_j += q · col_i
    fn add_col(&mut self, j: usize, i: usize, q: &BigInt) {
        add_col(&mut self.a, j, i, q);
        add_col(&mut self.right, j, i, q);
        add_row(&mut self.right_inv, i, j, &-q);
    }

    fn negate_row(&mut self, i: usize) {
        for v in self.a.row_mut(i) {
            *v = -&*v;
        }
        for v in self.left.row_mut(i) {
            *v = -&*v;
        }
        for r in 0..self.left_inv.rows() {
            let v = &mut self.left_inv[(r, i)];
            *v = -&*v;
        }
    }
}

fn add_row(m: &mut Matrix<BigInt>, i: usize, j: usize, q: &BigInt) {
    for c in 0..m.cols() {
        let t = &m[(j, c)] * q;
        m[(i, c)] += t;
    }
}

fn add_col(m: &mut Matrix<BigInt>, j: usize, i: usize, q: &BigInt) {
    for r in 0..m.rows() {
        let t = &m[(r, i)] * q;
        m[(r, j)] += t;
    }
}

pub fn smith_normal_form(m: &Matrix<BigInt>) -> SmithForm {
    smith_with_inverses(m).form
}

pub(crate) fn smith_with_inverses(m: &Matrix<BigInt>) -> SmithFull {
    let (k, n) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        left: Matrix::identity(k),
        left_inv: Matrix::identity(k),
        right: Matrix::identity(n),
        right_inv: Matrix::identity(n),
    };
    let steps = k.min(n);
    for t in 0..steps {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..k {
            for j in t..n {
                let v = &w.a[(i, j)];
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < w.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..k {
                if w.a[(i, t)].is_zero() {
                    continue;
                }
                let q = w.a[(i, t)].div_floor(&w.a[(t, t)]);
                w.add_row(i, t, &-q);
                if !w.a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if w.a[(t, j)].is_zero() {
                    continue;
                }
                let q = w.a[(t, j)].div_floor(&w.a[(t, t)]);
                w.add_col(j, t, &-q);
                if !w.a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a remainder is smaller than the pivot; promote the smallest one
                let mut best = (t, t);
                for i in t + 1..k {
                    if !w.a[(i, t)].is_zero() && w.a[(i, t)].abs() < w.a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    if !w.a[(t, j)].is_zero() && w.a[(t, j)].abs() < w.a[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    w.swap_rows(t, best.0);
                } else if best.1 != t {
                    w.swap_cols(t, best.1);
                }
                continue;
            }
            let offender = (t + 1..k)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a[(i, j)].is_multiple_of(&w.a[(t, t)]));
            match offender {
                Some((i, _)) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }
    let divisors = (0..steps).map(|t| w.a[(t, t)].clone()).collect();
    SmithFull {
        form: SmithForm {
            divisors,
            left: w.left,
            right: w.right,
        },
        left_inv: w.left_inv,
        right_inv: w.right_inv,
    }
}

/// Basis (as columns) of the integer span of the columns of `generators`.
pub fn lattice_basis(generators: &Matrix<BigInt>) -> Matrix<BigInt> {
    let full = smith_with_inverses(generators);
    let cols: Vec<Vec<BigInt>> = full
        .form
        .divisors
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .map(|(j, d)| full.left_inv.col(j).into_iter().map(|v| v * d).collect())
        .collect();
    let rows = generators.rows();
    Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
}

/// Unimodular matrix whose first column is the primitive vector `t`.
///
/// When `t` has a unit entry the remaining columns are the standard basis
/// vectors other than that position, in order; otherwise they come from the
/// Smith transform of `t`.
pub fn unimodular_with_first_column(t: &[BigInt]) -> Result<Matrix<BigInt>> {
    let m = t.len();
    let g = t.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if !g.is_one() {
        return Err(Error::NotPrimitive);
    }
    if let Some(p) = t.iter().position(|v| v.abs().is_one()) {
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(m);
        cols.push(t.to_vec());
        for j in (0..m).filter(|&j| j != p) {
            let mut e = vec![BigInt::zero(); m];
            e[j] = BigInt::one();
            cols.push(e);
        }
        return Ok(Matrix::from_cols(&cols));
    }
    let row = Matrix::from_rows(vec![t.to_vec()]);
    let full = smith_with_inverses(&row);
    // left is ±1 and t · right = (left⁻¹, 0, ...), so the first row of right⁻¹ is ±t
    let mut w = full.right_inv.transpose();
    if w[(0, 0)] != t[0] || (0..m).any(|i| w[(i, 0)] != t[i]) {
        for i in 0..m {
            let v = -&w[(i, 0)];
            w[(i, 0)] = v;
        }
    }
    debug_assert!((0..m).all(|i| w[(i, 0)] == t[i]));
    Ok(w)
}
