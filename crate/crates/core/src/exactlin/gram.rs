use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{check_symmetric, determinant, ldl_decompose, rank, Ldl, Matrix, Rational};
use crate::error::{Error, Result};
use crate::exactlin::CoordVector;

/// Symmetric positive definite rational matrix: the quadratic form `Q(x) = xᵀGx`.
///
/// Alongside the rational entries the form keeps an integer copy scaled by the
/// least common denominator, so that evaluations and comparisons of `Q` run in
/// integer arithmetic (and in `i128` whenever the entries are small).
#[derive(Clone)]
pub struct GramMatrix {
    entries: Matrix<Rational>,
    scaled: Matrix<BigInt>,
    denom: BigInt,
    small: Option<Vec<i64>>,
}

/// A form value multiplied by the form's common denominator.
#[derive(Clone, Debug)]
pub(crate) enum Scaled {
    Small(i128),
    Big(BigInt),
}

impl Scaled {
    pub(crate) fn to_bigint(&self) -> BigInt {
        match self {
            Scaled::Small(v) => BigInt::from(*v),
            Scaled::Big(v) => v.clone(),
        }
    }
}

impl PartialEq for Scaled {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scaled {}

impl PartialOrd for Scaled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scaled {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scaled::Small(a), Scaled::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl GramMatrix {
    /// Validates symmetry and positive definiteness.
    pub fn new(entries: Matrix<Rational>) -> Result<Self> {
        check_symmetric(&entries)?;
        let ldl = ldl_decompose(&entries)?;
        if let Some(index) = ldl.first_nonpositive_pivot() {
            return Err(Error::NotPositiveDefinite {
                index,
                pivot: ldl.d[index].clone(),
            });
        }
        Ok(Self::from_entries_unchecked(entries))
    }

    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let m = Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        );
        Self::new(m)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_entries_unchecked(Matrix::identity(n))
    }

    fn from_entries_unchecked(entries: Matrix<Rational>) -> Self {
        let denom = super::lcm_of_denominators(entries.iter());
        let d = Rational::from_integer(denom.clone());
        let scaled = entries.map(|v| (v * &d).to_integer());
        let small = small_copy(&scaled);
        GramMatrix {
            entries,
            scaled,
            denom,
            small,
        }
    }

    /// Builds the form `scaled / denom` without validation; callers guarantee
    /// that it is symmetric and positive definite.
    pub(crate) fn from_scaled(mut scaled: Matrix<BigInt>, mut denom: BigInt) -> Self {
        let g = scaled.iter().fold(denom.clone(), |g, v| g.gcd(v));
        if !g.is_one() && !g.is_zero() {
            scaled = scaled.map(|v| v / &g);
            denom /= &g;
        }
        let d = Rational::from_integer(denom.clone());
        let entries = scaled.map(|v| Rational::from_integer(v.clone()) / &d);
        let small = small_copy(&scaled);
        GramMatrix {
            entries,
            scaled,
            denom,
            small,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Matrix<Rational> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[(i, j)]
    }

    pub fn diag(&self, i: usize) -> &Rational {
        &self.entries[(i, i)]
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.dim()).map(|i| self.diag(i).clone()).collect()
    }

    /// Integer matrix `denom · G`.
    pub fn scaled(&self) -> &Matrix<BigInt> {
        &self.scaled
    }

    /// Least common denominator of the entries.
    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    pub fn min_diagonal(&self) -> Rational {
        // dim >= 1 for every validated form
        (0..self.dim())
            .map(|i| self.diag(i))
            .min()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn max_diagonal(&self) -> Rational {
        (0..self.dim())
            .map(|i| self.diag(i))
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn ldl(&self) -> Ldl {
        ldl_decompose(&self.entries).expect("gram matrices are symmetric")
    }

    pub fn determinant(&self) -> Rational {
        determinant(&self.entries).expect("gram matrices are square")
    }

    /// `Q(x)` with a dimension check.
    pub fn evaluate(&self, x: &CoordVector) -> Result<Rational> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(self.value(x.as_slice()))
    }

    /// `Q(x)`; panics when the length does not match.
    pub fn value(&self, x: &[i64]) -> Rational {
        Rational::new(self.scaled_value(x).to_bigint(), self.denom.clone())
    }

    /// `denom · Q(x)`.
    pub(crate) fn scaled_value(&self, x: &[i64]) -> Scaled {
        assert_eq!(x.len(), self.dim(), "coordinate length mismatch");
        if let Some(small) = &self.small {
            if let Some(v) = small_form(small, self.dim(), x) {
                return Scaled::Small(v);
            }
        }
        Scaled::Big(self.big_form(x))
    }

    pub(crate) fn scaled_diag(&self, i: usize) -> Scaled {
        match &self.small {
            Some(s) => Scaled::Small(s[i * self.dim() + i] as i128),
            None => Scaled::Big(self.scaled[(i, i)].clone()),
        }
    }

    fn big_form(&self, x: &[i64]) -> BigInt {
        let n = self.dim();
        let mut acc = BigInt::zero();
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let mut row = &self.scaled[(i, i)] * BigInt::from(x[i]);
            for j in i + 1..n {
                if x[j] != 0 {
                    row += &self.scaled[(i, j)] * BigInt::from(2 * x[j] as i128);
                }
            }
            acc += row * BigInt::from(x[i]);
        }
        acc
    }

    /// Bilinear form `xᵀGy`.
    pub fn inner(&self, x: &[i64], y: &[i64]) -> Rational {
        let n = self.dim();
        let mut acc = BigInt::zero();
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let mut row = BigInt::zero();
            for j in 0..n {
                if y[j] != 0 {
                    row += &self.scaled[(i, j)] * BigInt::from(y[j]);
                }
            }
            acc += row * BigInt::from(x[i]);
        }
        Rational::new(acc, self.denom.clone())
    }

    /// `Q` restricted to the leading `k` basis vectors.
    pub fn leading(&self, k: usize) -> GramMatrix {
        let m = Matrix::from_fn(k, k, |i, j| self.scaled[(i, j)].clone());
        GramMatrix::from_scaled(m, self.denom.clone())
    }
}

fn small_copy(scaled: &Matrix<BigInt>) -> Option<Vec<i64>> {
    // entries below 2^62 keep every partial sum of small_form well inside i128
    const LIMIT: i64 = 1 << 62;
    scaled.iter().map(|v| v.to_i64().filter(|x| x.abs() < LIMIT)).collect()
}

fn small_form(g: &[i64], n: usize, x: &[i64]) -> Option<i128> {
    let mut acc: i128 = 0;
    for i in 0..n {
        let xi = x[i] as i128;
        if xi == 0 {
            continue;
        }
        let mut row: i128 = (g[i * n + i] as i128).checked_mul(xi)?;
        for j in i + 1..n {
            let xj = x[j] as i128;
            if xj != 0 {
                row = row.checked_add((g[i * n + j] as i128).checked_mul(2 * xj)?)?;
            }
        }
        acc = acc.checked_add(row.checked_mul(xi)?)?;
    }
    Some(acc)
}

impl PartialEq for GramMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for GramMatrix {}

impl fmt::Display for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.entries, f)
    }
}

impl fmt::Debug for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.entries, f)
    }
}

/// Basis vectors embedded as the columns of a `d × n` rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedBasis {
    columns: Matrix<Rational>,
}

impl EmbeddedBasis {
    pub fn new(columns: Matrix<Rational>) -> Result<Self> {
        let r = rank(&columns);
        if r < columns.cols() {
            return Err(Error::LinearlyDependent {
                rank: r,
                expected: columns.cols(),
            });
        }
        Ok(EmbeddedBasis { columns })
    }

    pub fn ambient_dim(&self) -> usize {
        self.columns.rows()
    }

    pub fn rank(&self) -> usize {
        self.columns.cols()
    }

    pub fn columns(&self) -> &Matrix<Rational> {
        &self.columns
    }

    /// Ambient coordinates of the lattice point with the given basis coordinates.
    pub fn point(&self, x: &CoordVector) -> Vec<Rational> {
        let coords: Vec<Rational> = x.as_slice().iter().map(|&v| Rational::from_integer(v.into())).collect();
        self.columns.mul_vec(&coords)
    }
}

/// Exact `BᵀB`.
pub fn gram_from_basis(basis: &EmbeddedBasis) -> Result<GramMatrix> {
    let b = basis.columns();
    let gram = b.transpose().mul(b);
    GramMatrix::new(gram)
}
