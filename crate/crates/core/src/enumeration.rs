//! Exact short-vector enumeration and primitive systems.
//!
//! Enumeration is Fincke-Pohst over the LDL decomposition `Q(z) = Σ D_k (z_k +
//! Σ_{j>k} L_jk z_j)²`, carried out entirely in integers: each level is scaled
//! by the common denominator of its column of `L`, and all levels share one
//! common denominator `W` for the pivots. Level windows come from integer
//! square roots, so no value is ever rounded.
//!
//! A fast pass runs in `i128`; on overflow the search is replayed in `BigInt`,
//! skipping the leaves already reported, so callers see one uninterrupted
//! stream in a fixed order.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{
    lcm_of_denominators, rank_int, smith_with_inverses, unimodular_with_first_column, CoordVector, GramMatrix, Matrix,
    Rational, Scaled, UnimodularTransform,
};
use crate::reduction::lll::lll_integral;

/// Every nonzero vector with `Q(v) <= bound`, one per `±` pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVectorList {
    pub bound: Rational,
    /// Canonical sign, sorted by norm then coordinates.
    pub vectors: Vec<(CoordVector, Rational)>,
}

impl ShortVectorList {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn coords(&self) -> impl Iterator<Item = &CoordVector> {
        self.vectors.iter().map(|(v, _)| v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuccessiveMinima {
    pub norms: Vec<Rational>,
    pub witnesses: Vec<CoordVector>,
}

trait Word: Clone + Ord {
    fn lift(v: &BigInt) -> Option<Self>;
    fn of(v: i64) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    /// Floor division by a positive divisor.
    fn floor_div(&self, o: &Self) -> Self;
    /// Ceiling division by a positive divisor.
    fn ceil_div(&self, o: &Self) -> Self;
    fn isqrt(&self) -> Self;
    fn narrow(&self) -> Option<i64>;
    fn scaled(&self) -> Scaled;
    fn is_zero_word(&self) -> bool;
}

impl Word for i128 {
    fn lift(v: &BigInt) -> Option<Self> {
        // keep headroom so that a single unchecked negation cannot overflow
        v.to_i128().filter(|x| x.unsigned_abs() < (1u128 << 126))
    }
    fn of(v: i64) -> Self {
        v as i128
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn floor_div(&self, o: &Self) -> Self {
        self.div_euclid(*o)
    }
    fn ceil_div(&self, o: &Self) -> Self {
        -((-self).div_euclid(*o))
    }
    fn isqrt(&self) -> Self {
        i128::isqrt(*self)
    }
    fn narrow(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }
    fn scaled(&self) -> Scaled {
        Scaled::Small(*self)
    }
    fn is_zero_word(&self) -> bool {
        *self == 0
    }
}

impl Word for BigInt {
    fn lift(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn of(v: i64) -> Self {
        BigInt::from(v)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn floor_div(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn ceil_div(&self, o: &Self) -> Self {
        Integer::div_ceil(self, o)
    }
    fn isqrt(&self) -> Self {
        Roots::sqrt(self)
    }
    fn narrow(&self) -> Option<i64> {
        self.to_i64()
    }
    fn scaled(&self) -> Scaled {
        Scaled::Big(self.clone())
    }
    fn is_zero_word(&self) -> bool {
        self.is_zero()
    }
}

#[derive(Clone, Debug)]
struct Levels<T> {
    /// Denominator of column `k` of `L`.
    m: Vec<T>,
    /// `a[k][j] = m_k · L_jk` for `j > k`.
    a: Vec<Vec<T>>,
    /// `W · D_k / m_k²`.
    omega: Vec<T>,
}

impl Levels<BigInt> {
    fn narrow(&self) -> Option<Levels<i128>> {
        let lift = |v: &[BigInt]| v.iter().map(i128::lift).collect::<Option<Vec<_>>>();
        Some(Levels {
            m: lift(&self.m)?,
            a: self.a.iter().map(|r| lift(r)).collect::<Option<Vec<_>>>()?,
            omega: lift(&self.omega)?,
        })
    }
}

/// A search request in the tree's own coordinates.
pub(crate) struct Search {
    /// Enumerate `z ≡ residue (mod modulus)`.
    pub modulus: i64,
    pub residue: Vec<i64>,
    /// Caps on `W · Q`, selected per level by the policy.
    pub caps: Vec<BigInt>,
    /// Report one vector per `±` pair (last nonzero coordinate positive) and
    /// skip zero. Requires a residue class closed under negation.
    pub half: bool,
}

enum Halt {
    Overflow,
    Stopped,
}

struct Walk<'a, T, P, V> {
    lv: &'a Levels<T>,
    q: T,
    gamma: &'a [i64],
    gamma_t: Vec<T>,
    caps: Vec<T>,
    half: bool,
    z: Vec<i64>,
    zt: Vec<T>,
    skip: usize,
    emitted: usize,
    policy: &'a mut P,
    visit: &'a mut V,
}

impl<T, P, V> Walk<'_, T, P, V>
where
    T: Word,
    P: FnMut(usize, &[i64]) -> Option<usize>,
    V: FnMut(&[i64], Scaled) -> ControlFlow<()>,
{
    fn level(&mut self, k: usize, acc: &T, zero_above: bool) -> std::result::Result<(), Halt> {
        let n = self.z.len();
        let Some(ci) = (self.policy)(k, &self.z[k + 1..]) else {
            return Ok(());
        };
        let cap = self.caps[ci].clone();
        if *acc > cap {
            return Ok(());
        }
        let mut s = T::of(0);
        for j in k + 1..n {
            if !self.zt[j].is_zero_word() {
                let t = self.lv.a[k][j].mul(&self.zt[j]).ok_or(Halt::Overflow)?;
                s = s.add(&t).ok_or(Halt::Overflow)?;
            }
        }
        let mk = &self.lv.m[k];
        let step = mk.mul(&self.q).ok_or(Halt::Overflow)?;
        let c = mk.mul(&self.gamma_t[k]).and_then(|v| v.add(&s)).ok_or(Halt::Overflow)?;
        let omega = &self.lv.omega[k];
        let r = cap.sub(acc).ok_or(Halt::Overflow)?.floor_div(omega).isqrt();
        let zero = T::of(0);
        let neg_r = zero.sub(&r).ok_or(Halt::Overflow)?;
        let mut lo = neg_r.sub(&c).ok_or(Halt::Overflow)?.ceil_div(&step);
        let hi = r.sub(&c).ok_or(Halt::Overflow)?.floor_div(&step);
        if self.half && zero_above && lo < zero {
            lo = T::of(0);
        }
        let one = T::of(1);
        let mut x = lo;
        while x <= hi {
            let y = step.mul(&x).and_then(|v| v.add(&c)).ok_or(Halt::Overflow)?;
            let acc2 = omega
                .mul(&y)
                .and_then(|v| v.mul(&y))
                .and_then(|v| v.add(acc))
                .ok_or(Halt::Overflow)?;
            if acc2 <= cap {
                let zk_t = self
                    .q
                    .mul(&x)
                    .and_then(|v| v.add(&self.gamma_t[k]))
                    .ok_or(Halt::Overflow)?;
                let zk = zk_t.narrow().ok_or(Halt::Overflow)?;
                self.z[k] = zk;
                self.zt[k] = zk_t;
                if k == 0 {
                    if !(self.half && zero_above && zk == 0) {
                        if self.emitted >= self.skip && (self.visit)(&self.z, acc2.scaled()).is_break() {
                            return Err(Halt::Stopped);
                        }
                        self.emitted += 1;
                    }
                } else {
                    self.level(k - 1, &acc2, zero_above && zk == 0)?;
                }
            }
            x = x.add(&one).ok_or(Halt::Overflow)?;
        }
        self.z[k] = 0;
        self.zt[k] = T::of(0);
        Ok(())
    }
}

/// Integer enumeration data for one form, in that form's own basis order.
#[derive(Clone, Debug)]
pub(crate) struct Tree {
    n: usize,
    big: Levels<BigInt>,
    small: Option<Levels<i128>>,
    w: BigInt,
}

impl Tree {
    pub(crate) fn new(form: &GramMatrix) -> Self {
        let n = form.dim();
        let ldl = form.ldl();
        let mut m = Vec::with_capacity(n);
        let mut a = vec![vec![BigInt::zero(); n]; n];
        let mut weights = Vec::with_capacity(n);
        for k in 0..n {
            let mk = (k + 1..n).fold(BigInt::one(), |acc, j| acc.lcm(ldl.l[(j, k)].denom()));
            let mk_r = Rational::from_integer(mk.clone());
            for j in k + 1..n {
                a[k][j] = (&ldl.l[(j, k)] * &mk_r).to_integer();
            }
            weights.push(&ldl.d[k] / (&mk_r * &mk_r));
            m.push(mk);
        }
        let w = lcm_of_denominators(weights.iter());
        let w_r = Rational::from_integer(w.clone());
        let omega = weights.iter().map(|x| (x * &w_r).to_integer()).collect();
        let big = Levels { m, a, omega };
        let small = big.narrow();
        Tree { n, big, small, w }
    }

    /// Cap on the scaled value `W · Q` encoding `Q <= bound` or `Q < bound`.
    pub(crate) fn cap(&self, bound: &Rational, strict: bool) -> BigInt {
        let scaled = bound * Rational::from_integer(self.w.clone());
        if strict {
            scaled.ceil().to_integer() - 1
        } else {
            scaled.floor().to_integer()
        }
    }

    pub(crate) fn norm(&self, s: &Scaled) -> Rational {
        Rational::new(s.to_bigint(), self.w.clone())
    }

    pub(crate) fn run<P, V>(&self, search: &Search, mut policy: P, mut visit: V) -> Result<()>
    where
        P: FnMut(usize, &[i64]) -> Option<usize>,
        V: FnMut(&[i64], Scaled) -> ControlFlow<()>,
    {
        if self.n == 0 {
            return Ok(());
        }
        assert_eq!(search.residue.len(), self.n, "residue length mismatch");
        assert!(search.modulus >= 1, "modulus must be positive");
        let mut skip = 0;
        if let Some(small) = &self.small {
            if let Some(caps) = search.caps.iter().map(i128::lift).collect::<Option<Vec<_>>>() {
                match self.walk(small, caps, search, 0, &mut policy, &mut visit) {
                    Ok(()) | Err((Halt::Stopped, _)) => return Ok(()),
                    Err((Halt::Overflow, emitted)) => skip = emitted,
                }
            }
        }
        match self.walk(&self.big, search.caps.clone(), search, skip, &mut policy, &mut visit) {
            Ok(()) | Err((Halt::Stopped, _)) => Ok(()),
            Err((Halt::Overflow, _)) => Err(Error::CoordinateOverflow),
        }
    }

    fn walk<T: Word, P, V>(
        &self,
        lv: &Levels<T>,
        caps: Vec<T>,
        search: &Search,
        skip: usize,
        policy: &mut P,
        visit: &mut V,
    ) -> std::result::Result<(), (Halt, usize)>
    where
        P: FnMut(usize, &[i64]) -> Option<usize>,
        V: FnMut(&[i64], Scaled) -> ControlFlow<()>,
    {
        let mut w = Walk {
            lv,
            q: T::of(search.modulus),
            gamma: &search.residue,
            gamma_t: search.residue.iter().map(|&g| T::of(g)).collect(),
            caps,
            half: search.half,
            z: vec![0; self.n],
            zt: vec![T::of(0); self.n],
            skip,
            emitted: 0,
            policy,
            visit,
        };
        debug_assert!(w.gamma.len() == self.n);
        let r = w.level(self.n - 1, &T::of(0), true);
        r.map_err(|h| (h, w.emitted))
    }
}

/// Reusable enumerator for one form. Searches run on an LLL-reduced copy and
/// report coordinates in the original basis.
#[derive(Clone, Debug)]
pub struct Enumerator {
    form: GramMatrix,
    reduced: GramMatrix,
    transform: UnimodularTransform,
    inverse: UnimodularTransform,
    map_small: Option<Vec<i64>>,
    tree: Tree,
}

impl Enumerator {
    pub fn new(form: &GramMatrix) -> Self {
        let lll = lll_integral(form, &Rational::new(99.into(), 100.into())).expect("delta is in range");
        let tree = Tree::new(&lll.gram);
        let map_small = lll
            .transform
            .entries()
            .iter()
            .map(|v| v.to_i64())
            .collect::<Option<Vec<_>>>();
        Enumerator {
            form: form.clone(),
            inverse: lll.transform.inverse(),
            reduced: lll.gram,
            transform: lll.transform,
            map_small,
            tree,
        }
    }

    pub fn form(&self) -> &GramMatrix {
        &self.form
    }

    /// The LLL-reduced form the searches run on.
    pub fn reduced_form(&self) -> &GramMatrix {
        &self.reduced
    }

    fn to_original(&self, z: &[i64]) -> Result<CoordVector> {
        if self.transform.is_identity() {
            return Ok(CoordVector::from(z));
        }
        let n = z.len();
        match &self.map_small {
            Some(t) => {
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    let mut acc: i128 = 0;
                    for j in 0..n {
                        let p = (t[i * n + j] as i128).checked_mul(z[j] as i128);
                        acc = p.and_then(|p| acc.checked_add(p)).ok_or(Error::CoordinateOverflow)?;
                    }
                    out.push(i64::try_from(acc).map_err(|_| Error::CoordinateOverflow)?);
                }
                Ok(CoordVector::new(out))
            }
            None => self.transform.map(&CoordVector::from(z)),
        }
    }

    /// Visits every nonzero `v` with `Q(v) <= bound` (or `< bound`), one per
    /// `±` pair, in a fixed but unspecified order. Coordinates are in the
    /// original basis and not sign-normalized.
    pub fn visit<F>(&self, bound: &Rational, strict: bool, mut f: F) -> Result<()>
    where
        F: FnMut(&CoordVector, &Rational) -> ControlFlow<()>,
    {
        let search = Search {
            modulus: 1,
            residue: vec![0; self.form.dim()],
            caps: vec![self.tree.cap(bound, strict)],
            half: true,
        };
        let mut err = None;
        self.tree.run(
            &search,
            |_, _| Some(0),
            |z, s| match self.to_original(z) {
                Ok(x) => f(&x, &self.tree.norm(&s)),
                Err(e) => {
                    err = Some(e);
                    ControlFlow::Break(())
                }
            },
        )?;
        err.map_or(Ok(()), Err)
    }

    pub fn short_vectors(&self, bound: &Rational) -> Result<ShortVectorList> {
        if !bound.is_positive() {
            return Err(Error::NonPositiveBound(bound.clone()));
        }
        self.collect(bound, false)
    }

    fn collect(&self, bound: &Rational, strict: bool) -> Result<ShortVectorList> {
        let mut vectors = Vec::new();
        self.visit(bound, strict, |v, q| {
            vectors.push((v.canonical(), q.clone()));
            ControlFlow::Continue(())
        })?;
        vectors.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        Ok(ShortVectorList {
            bound: bound.clone(),
            vectors,
        })
    }

    /// Squared minimum and all minimal vectors.
    pub fn minimum(&self) -> Result<(Rational, ShortVectorList)> {
        let bound = self.reduced.min_diagonal();
        let all = self.collect(&bound, false)?;
        let min = all.vectors[0].1.clone();
        let vectors = all.vectors.into_iter().take_while(|(_, q)| *q == min).collect();
        Ok((min.clone(), ShortVectorList { bound: min, vectors }))
    }

    /// Shortest vectors of the class `residue + modulus · L` (coordinates in
    /// the original basis). With modulus 2 the class is closed under negation
    /// and one vector per `±` pair is returned, sign-normalized.
    pub fn class_minimum(&self, modulus: i64, residue: &[i64]) -> Result<(Rational, Vec<CoordVector>)> {
        let n = self.form.dim();
        assert!(modulus >= 1, "modulus must be positive");
        if residue.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: residue.len(),
            });
        }
        let inv = self.inverse.map(&CoordVector::from(residue))?;
        let gamma: Vec<i64> = inv.as_slice().iter().map(|v| v.rem_euclid(modulus)).collect();
        let half = gamma.iter().all(|g| (2 * g) % modulus == 0);
        if gamma.iter().all(|&g| g == 0) {
            let (m, list) = self.minimum()?;
            let scaled: Result<Vec<CoordVector>> = list
                .coords()
                .map(|v| {
                    let s: Option<Vec<i64>> = v.as_slice().iter().map(|x| x.checked_mul(modulus)).collect();
                    s.map(CoordVector::new).ok_or(Error::CoordinateOverflow)
                })
                .collect();
            return Ok((m * Rational::from_integer((modulus * modulus).into()), scaled?));
        }
        // a balanced representative is a feasible point of the class
        let centered: Vec<i64> = gamma
            .iter()
            .map(|&g| if 2 * g > modulus { g - modulus } else { g })
            .collect();
        let feasible = self.reduced.value(&centered);
        let mut bound = self.reduced.min_diagonal().min(feasible.clone());
        loop {
            let search = Search {
                modulus,
                residue: gamma.clone(),
                caps: vec![self.tree.cap(&bound, false)],
                half,
            };
            let mut found: Vec<(Scaled, Vec<i64>)> = Vec::new();
            let mut best: Option<Scaled> = None;
            self.tree.run(
                &search,
                |_, _| Some(0),
                |z, s| {
                    match &best {
                        Some(b) if s > *b => {}
                        Some(b) if s == *b => found.push((s, z.to_vec())),
                        _ => {
                            best = Some(s.clone());
                            found.clear();
                            found.push((s, z.to_vec()));
                        }
                    }
                    ControlFlow::Continue(())
                },
            )?;
            if let Some(b) = best {
                let mut out = Vec::with_capacity(found.len());
                for (_, z) in found {
                    let x = self.to_original(&z)?;
                    out.push(if half { x.canonical() } else { x });
                }
                out.sort();
                return Ok((self.tree.norm(&b), out));
            }
            if bound >= feasible {
                unreachable!("the balanced representative lies within the bound");
            }
            bound = (bound * Rational::from_integer(2.into())).min(feasible.clone());
        }
    }
}

/// All nonzero `v` with `Q(v) <= bound`, one per `±` pair.
pub fn enumerate_short_vectors(g: &GramMatrix, bound: &Rational) -> Result<ShortVectorList> {
    Enumerator::new(g).short_vectors(bound)
}

pub fn lattice_minimum(g: &GramMatrix) -> Result<(Rational, ShortVectorList)> {
    Enumerator::new(g).minimum()
}

/// Incremental linear independence test over the rationals.
#[derive(Clone, Debug, Default)]
pub(crate) struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    fn reduce(&self, v: &[i64]) -> Vec<Rational> {
        let mut r: Vec<Rational> = v.iter().map(|&x| Rational::from_integer(x.into())).collect();
        for (p, row) in &self.rows {
            if r[*p].is_zero() {
                continue;
            }
            let f = &r[*p] / &row[*p];
            for (ri, xi) in r.iter_mut().zip(row) {
                *ri -= &f * xi;
            }
        }
        r
    }

    /// Adds `v` when it is independent of the rows so far.
    pub(crate) fn insert(&mut self, v: &[i64]) -> bool {
        let r = self.reduce(v);
        match r.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

/// Greedy system of successive minimum vectors.
pub fn successive_minima(g: &GramMatrix) -> Result<SuccessiveMinima> {
    let n = g.dim();
    let en = Enumerator::new(g);
    let cap = en.reduced_form().max_diagonal();
    let mut bound = en.reduced_form().min_diagonal();
    loop {
        let list = en.collect(&bound, false)?;
        let mut echelon = Echelon::default();
        let mut norms = Vec::with_capacity(n);
        let mut witnesses = Vec::with_capacity(n);
        for (v, q) in &list.vectors {
            if echelon.insert(v.as_slice()) {
                norms.push(q.clone());
                witnesses.push(v.clone());
                if witnesses.len() == n {
                    return Ok(SuccessiveMinima { norms, witnesses });
                }
            }
        }
        // the reduced basis itself lies within `cap`
        assert!(bound < cap, "basis vectors lie within the largest diagonal entry");
        bound = (bound * Rational::from_integer(2.into())).min(cap.clone());
    }
}

fn rows_matrix(vectors: &[CoordVector]) -> Result<(usize, Matrix<BigInt>)> {
    let n = vectors.first().map_or(0, CoordVector::len);
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    let m = Matrix::from_rows(vectors.iter().map(CoordVector::to_bigints).collect());
    let rank = rank_int(&m);
    if rank < vectors.len() {
        return Err(Error::LinearlyDependent {
            rank,
            expected: vectors.len(),
        });
    }
    Ok((n, m))
}

/// Whether the vectors span a saturated sublattice: all Smith divisors of the
/// coordinate matrix equal one.
pub fn is_primitive_system(vectors: &[CoordVector]) -> Result<bool> {
    if vectors.is_empty() {
        return Ok(true);
    }
    let (_, m) = rows_matrix(vectors)?;
    let full = smith_with_inverses(&m);
    Ok(full.form.divisors.iter().all(One::is_one))
}

/// Unimodular matrix whose first `k` columns are the given primitive system.
pub fn complete_to_basis(vectors: &[CoordVector], n: usize) -> Result<UnimodularTransform> {
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    if vectors.len() > n {
        return Err(Error::LinearlyDependent {
            rank: n,
            expected: vectors.len(),
        });
    }
    match vectors.len() {
        0 => return Ok(UnimodularTransform::identity(n)),
        1 if !vectors[0].is_zero() => {
            return Ok(UnimodularTransform::new_unchecked(unimodular_with_first_column(
                &vectors[0].to_bigints(),
            )?));
        }
        _ => {}
    }
    let (_, m) = rows_matrix(vectors)?;
    let k = vectors.len();
    let full = smith_with_inverses(&m);
    if !full.form.divisors.iter().all(One::is_one) {
        return Err(Error::NotPrimitive);
    }
    // S = left⁻¹ · (first k rows of right⁻¹), so replacing those rows by S
    // keeps the determinant at ±1
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            if i < k {
                vectors[i].to_bigints()
            } else {
                full.right_inv.row(i).to_vec()
            }
        })
        .collect();
    Ok(UnimodularTransform::new_unchecked(Matrix::from_rows(rows).transpose()))
}

/// Tests `{partial, v}` for primitivity through a fixed completion of
/// `partial`: the tail of `U⁻¹ v` must have gcd one.
pub(crate) struct ExtensionTest {
    k: usize,
    inverse_rows: Vec<Vec<BigInt>>,
    feasible: Rational,
}

impl ExtensionTest {
    pub(crate) fn new(g: &GramMatrix, partial: &[CoordVector]) -> Result<Self> {
        let n = g.dim();
        let k = partial.len();
        if k >= n {
            return Err(Error::NothingToExtend { k, n });
        }
        let u = complete_to_basis(partial, n)?;
        let inv = u.inverse();
        let inverse_rows = (k..n).map(|i| inv.entries().row(i).to_vec()).collect();
        let column = u.column(k)?;
        Ok(ExtensionTest {
            k,
            inverse_rows,
            feasible: g.value(column.as_slice()),
        })
    }

    pub(crate) fn extends(&self, v: &CoordVector) -> bool {
        debug_assert!(self.k < v.len());
        let mut g = BigInt::zero();
        for row in &self.inverse_rows {
            let mut acc = BigInt::zero();
            for (r, &x) in row.iter().zip(v.as_slice()) {
                if x != 0 && !r.is_zero() {
                    acc += r * x;
                }
            }
            g = g.gcd(&acc);
            if g.is_one() {
                return true;
            }
        }
        g.is_one()
    }
}

/// Shortest `v` such that `partial ∪ {v}` is a primitive system; ties go to
/// the lexicographically smallest canonical vector.
pub fn shortest_primitive_extension(g: &GramMatrix, partial: &[CoordVector]) -> Result<CoordVector> {
    shortest_extension_with(&Enumerator::new(g), partial).map(|(v, _)| v)
}

pub(crate) fn shortest_extension_with(en: &Enumerator, partial: &[CoordVector]) -> Result<(CoordVector, Rational)> {
    let test = ExtensionTest::new(en.form(), partial)?;
    let mut bound = en.reduced_form().min_diagonal().min(test.feasible.clone());
    loop {
        let mut best: Option<(Rational, CoordVector)> = None;
        en.visit(&bound, false, |v, q| {
            if best.as_ref().is_some_and(|(b, _)| q > b) || !test.extends(v) {
                return ControlFlow::Continue(());
            }
            let c = v.canonical();
            let better = match &best {
                None => true,
                Some((b, bv)) => q < b || (q == b && c < *bv),
            };
            if better {
                best = Some((q.clone(), c));
            }
            ControlFlow::Continue(())
        })?;
        if let Some((q, v)) = best {
            return Ok((v, q));
        }
        assert!(bound < test.feasible, "the completion column is a feasible extension");
        bound = (bound * Rational::from_integer(2.into())).min(test.feasible.clone());
    }
}
