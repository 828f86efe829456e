use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

/// Integer coordinates of a lattice point with respect to a basis.
///
/// Coordinates are machine integers: every vector produced by enumeration
/// satisfies a norm bound, which keeps its coordinates small. Conversions from
/// arbitrary-precision arithmetic are checked and fail with
/// [`Error::CoordinateOverflow`](crate::Error::CoordinateOverflow).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordVector(Vec<i64>);

impl CoordVector {
    pub fn new(coords: Vec<i64>) -> Self {
        CoordVector(coords)
    }

    pub fn zeros(n: usize) -> Self {
        CoordVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        CoordVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn neg(&self) -> Self {
        CoordVector(self.0.iter().map(|x| -x).collect())
    }

    /// Sign representative of `±self` whose first nonzero coordinate is positive.
    pub fn canonical(&self) -> Self {
        match self.0.iter().find(|&&x| x != 0) {
            Some(&x) if x < 0 => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.0.iter().find(|&&x| x != 0).is_none_or(|&x| x > 0)
    }

    /// Largest index with a nonzero coordinate.
    pub fn pivot_index(&self) -> Option<usize> {
        self.0.iter().rposition(|&x| x != 0)
    }

    /// `gcd(x_i, ..., x_{n-1})`, zero when the tail vanishes.
    pub fn tail_gcd(&self, i: usize) -> u64 {
        self.0[i..].iter().fold(0u64, |g, &x| g.gcd(&x.unsigned_abs()))
    }

    /// Largest `i` with `gcd(x_i, ..., x_{n-1}) = 1`.
    pub fn last_primitive_tail(&self) -> Option<usize> {
        let mut g = 0u64;
        for i in (0..self.0.len()).rev() {
            g = g.gcd(&self.0[i].unsigned_abs());
            if g == 1 {
                return Some(i);
            }
        }
        None
    }

    pub fn max_abs(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn nonzero_count(&self) -> usize {
        self.0.iter().filter(|&&x| x != 0).count()
    }

    /// Absolute values sorted in decreasing order.
    pub fn abs_profile(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.0.iter().map(|x| x.unsigned_abs()).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn to_bigints(&self) -> Vec<BigInt> {
        self.0.iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn extended(&self, n: usize) -> Self {
        let mut v = self.0.clone();
        v.resize(n, 0);
        CoordVector(v)
    }
}

impl From<Vec<i64>> for CoordVector {
    fn from(v: Vec<i64>) -> Self {
        CoordVector(v)
    }
}

impl From<&[i64]> for CoordVector {
    fn from(v: &[i64]) -> Self {
        CoordVector(v.to_vec())
    }
}

impl std::ops::Index<usize> for CoordVector {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl fmt::Display for CoordVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for CoordVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
