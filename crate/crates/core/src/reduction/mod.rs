//! Minkowski reduction and reducedness checks.
//!
//! A basis is Minkowski-reduced when every `e_i` is a shortest vector among
//! the `u` with `gcd(u_i, ..., u_n) = 1`. Up to dimension six this reduces to
//! finitely many inequalities from the reduction table; in any dimension it
//! can be decided by enumeration.

mod hermite;
pub(crate) mod lll;

use std::collections::VecDeque;
use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::enumeration::{shortest_extension_with, Enumerator, Search, Tree};
use crate::error::{Error, Result};
use crate::exactlin::{
    apply_unchecked, unimodular_with_first_column, CoordVector, GramMatrix, Matrix, Rational, Scaled,
    UnimodularTransform,
};
use crate::tables::{reduction_set, ExpandedCandidate};

pub use hermite::{hermite_witness_search, HermiteOutcome};

/// A vector that breaks the inequality `Q(u) >= Q(e_index)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub u: CoordVector,
    pub index: usize,
    pub q_u: Rational,
    pub q_ei: Rational,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{} = {} < Q(e{}) = {}", self.u, self.q_u, self.index + 1, self.q_ei)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Reduced,
    Violated(Violation),
}

impl Verdict {
    pub fn is_reduced(&self) -> bool {
        matches!(self, Verdict::Reduced)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Verdict::Reduced => None,
            Verdict::Violated(v) => Some(v),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub reduced_gram: GramMatrix,
    /// Columns are the new basis vectors in input coordinates.
    pub transform: UnimodularTransform,
    /// Basis-vector replacements (or LLL swaps for [`lll_reduce`]).
    pub iterations: usize,
    /// Adjacent swaps made while sorting by length.
    pub swaps: usize,
    pub violations_fixed: Vec<Violation>,
    /// Whether an LLL pass ran before the table loop finished.
    pub lll_applied: bool,
}

enum Found {
    Unsorted(usize),
    Candidate(usize),
}

fn scan(g: &GramMatrix, cands: &[ExpandedCandidate]) -> Option<Found> {
    let n = g.dim();
    let diag: Vec<Scaled> = (0..n).map(|i| g.scaled_diag(i)).collect();
    if let Some(i) = (0..n.saturating_sub(1)).find(|&i| diag[i + 1] < diag[i]) {
        return Some(Found::Unsorted(i));
    }
    cands
        .iter()
        .position(|c| g.scaled_value(c.coords.as_slice()) < diag[c.inequality_index])
        .map(Found::Candidate)
}

fn violation_of(g: &GramMatrix, cands: &[ExpandedCandidate], found: &Found) -> Violation {
    match *found {
        Found::Unsorted(i) => Violation {
            u: CoordVector::unit(g.dim(), i + 1),
            index: i,
            q_u: g.diag(i + 1).clone(),
            q_ei: g.diag(i).clone(),
        },
        Found::Candidate(idx) => {
            let c = &cands[idx];
            Violation {
                u: c.coords.clone(),
                index: c.inequality_index,
                q_u: g.value(c.coords.as_slice()),
                q_ei: g.diag(c.inequality_index).clone(),
            }
        }
    }
}

/// Checks the finite table conditions: sorted diagonal and `Q(u) >= Q(e_i)`
/// for every expanded candidate. Reports the first failure in candidate order.
pub fn is_minkowski_reduced_table(g: &GramMatrix) -> Result<Verdict> {
    let cands = reduction_set(g.dim())?;
    Ok(match scan(g, cands) {
        None => Verdict::Reduced,
        Some(f) => Verdict::Violated(violation_of(g, cands, &f)),
    })
}

/// Vectors visited per radius before switching to the input-basis search.
const RADIUS_SEARCH_LIMIT: usize = 20_000;

struct Violator {
    q: Rational,
    u: CoordVector,
    index: usize,
}

/// Decides reducedness from the definition by enumeration, in any dimension.
///
/// The reported violation is the shortest one (ties by canonical
/// coordinates), at the largest index it breaks.
pub fn is_minkowski_reduced_definitional(g: &GramMatrix) -> Result<Verdict> {
    let n = g.dim();
    if n == 0 {
        return Ok(Verdict::Reduced);
    }
    let diag = g.diagonal();
    let mut prefix_max = Vec::with_capacity(n);
    for d in &diag {
        let m = prefix_max.last().map_or(d, |p: &Rational| p.max(d)).clone();
        prefix_max.push(m);
    }
    let top = prefix_max[n - 1].clone();
    let judge = |v: &CoordVector, q: &Rational, best: &mut Option<Violator>| {
        let Some(last) = v.last_primitive_tail() else { return };
        if q >= &prefix_max[last] {
            return;
        }
        let index = (0..=last)
            .rev()
            .find(|&i| q < &diag[i])
            .expect("prefix maximum is attained");
        let u = v.canonical();
        let better = best.as_ref().is_none_or(|b| q < &b.q || (q == &b.q && u < b.u));
        if better {
            *best = Some(Violator { q: q.clone(), u, index });
        }
    };
    let verdict = |best: Option<Violator>| match best {
        None => Verdict::Reduced,
        Some(b) => Verdict::Violated(Violation {
            q_ei: diag[b.index].clone(),
            u: b.u,
            index: b.index,
            q_u: b.q,
        }),
    };

    // growing radius on the LLL-reduced copy finds short violations quickly
    let en = Enumerator::new(g);
    let mut r = en.reduced_form().min_diagonal();
    loop {
        let bound = (&r).min(&top).clone();
        let mut best = None;
        let mut visited = 0usize;
        en.visit(&bound, true, |v, q| {
            judge(v, q, &mut best);
            visited += 1;
            if visited > RADIUS_SEARCH_LIMIT {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if visited > RADIUS_SEARCH_LIMIT {
            break;
        }
        if best.is_some() || bound == top {
            return Ok(verdict(best));
        }
        r *= Rational::from_integer(2.into());
    }

    // Remaining violations are long; search in the input basis, where a fixed
    // tail with gcd one pins down the only inequalities it can break.
    let tree = Tree::new(g);
    let caps: Vec<BigInt> = prefix_max.iter().map(|p| tree.cap(p, true)).collect();
    let search = Search {
        modulus: 1,
        residue: vec![0; n],
        caps,
        half: true,
    };
    let mut best = None;
    tree.run(
        &search,
        |k, tail| {
            let mut gcd = 0u64;
            for (j, &x) in tail.iter().enumerate().rev() {
                gcd = gcd.gcd(&x.unsigned_abs());
                if gcd == 1 {
                    return Some(k + 1 + j);
                }
            }
            Some(k)
        },
        |z, s| {
            judge(&CoordVector::from(z), &tree.norm(&s), &mut best);
            ControlFlow::Continue(())
        },
    )?;
    Ok(verdict(best))
}

struct Donaldson<'a> {
    cands: &'a [ExpandedCandidate],
    gram: GramMatrix,
    t: Matrix<BigInt>,
    iterations: usize,
    swaps: usize,
    fixed: Vec<Violation>,
    recent: VecDeque<String>,
    cap: usize,
}

impl Donaldson<'_> {
    fn note(&mut self, s: String) {
        if self.recent.len() == 8 {
            self.recent.pop_front();
        }
        self.recent.push_back(s);
    }

    /// Runs until reduced (`true`) or until `limit` replacements were made
    /// in this call (`false`).
    fn run(&mut self, limit: Option<usize>) -> Result<bool> {
        let mut made = 0;
        loop {
            if self.iterations + self.swaps > self.cap {
                return Err(Error::IterationCap {
                    cap: self.cap,
                    trace: self.recent.iter().cloned().collect::<Vec<_>>().join("; "),
                });
            }
            match scan(&self.gram, self.cands) {
                None => return Ok(true),
                Some(Found::Unsorted(i)) => {
                    let mut s = self.gram.scaled().clone();
                    s.swap_rows(i, i + 1);
                    s.swap_cols(i, i + 1);
                    self.gram = GramMatrix::from_scaled(s, self.gram.denom().clone());
                    self.t.swap_cols(i, i + 1);
                    self.swaps += 1;
                    self.note(format!("swap e{} e{}", i + 1, i + 2));
                }
                Some(found @ Found::Candidate(_)) => {
                    if limit.is_some_and(|l| made >= l) {
                        return Ok(false);
                    }
                    let v = violation_of(&self.gram, self.cands, &found);
                    let m = replacement(&v.u, v.index)?;
                    self.gram = apply_unchecked(&self.gram, &m);
                    self.t = self.t.mul(&m);
                    self.iterations += 1;
                    made += 1;
                    self.note(v.to_string());
                    self.fixed.push(v);
                }
            }
        }
    }
}

/// Unimodular matrix keeping `e_0, ..., e_{k-1}` and putting `u` in place of
/// `e_k`; requires `gcd(u_k, ..., u_{n-1}) = 1`.
fn replacement(u: &CoordVector, k: usize) -> Result<Matrix<BigInt>> {
    let n = u.len();
    let tail: Vec<BigInt> = u.as_slice()[k..].iter().map(|&x| BigInt::from(x)).collect();
    let w = unimodular_with_first_column(&tail)?;
    Ok(Matrix::from_fn(n, n, |i, j| {
        if j < k {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        } else if i < k {
            if j == k {
                BigInt::from(u[i])
            } else {
                BigInt::zero()
            }
        } else {
            w[(i - k, j - k)].clone()
        }
    }))
}

/// Table-driven reduction: while some inequality fails, replace `e_i` by the
/// offending candidate and re-sort by length.
///
/// When the input is far from reduced, an LLL pass is inserted after the
/// first `n` replacements.
pub fn minkowski_reduce(g: &GramMatrix) -> Result<ReductionReport> {
    let n = g.dim();
    let cands = reduction_set(n)?;
    let mut st = Donaldson {
        cands,
        gram: g.clone(),
        t: Matrix::identity(n),
        iterations: 0,
        swaps: 0,
        fixed: Vec::new(),
        recent: VecDeque::new(),
        cap: 10 * n * cands.len(),
    };
    let mut lll_applied = false;
    if !st.run(Some(n))? {
        let out = lll::lll_integral(&st.gram, &Rational::new(99.into(), 100.into()))?;
        st.gram = out.gram;
        st.t = st.t.mul(out.transform.entries());
        lll_applied = true;
        let done = st.run(None)?;
        debug_assert!(done);
    }
    Ok(ReductionReport {
        reduced_gram: st.gram,
        transform: UnimodularTransform::new_unchecked(st.t),
        iterations: st.iterations,
        swaps: st.swaps,
        violations_fixed: st.fixed,
        lll_applied,
    })
}

/// Builds a Minkowski-reduced basis vector by vector, each a shortest
/// primitive extension of the previous ones.
pub fn greedy_minkowski_basis(g: &GramMatrix) -> Result<ReductionReport> {
    let n = g.dim();
    let en = Enumerator::new(g);
    let mut basis: Vec<CoordVector> = Vec::with_capacity(n);
    for _ in 0..n {
        let (v, _) = shortest_extension_with(&en, &basis)?;
        basis.push(v);
    }
    let t = UnimodularTransform::from_columns(&basis)?;
    Ok(ReductionReport {
        reduced_gram: apply_unchecked(g, t.entries()),
        transform: t,
        iterations: n,
        swaps: 0,
        violations_fixed: Vec::new(),
        lll_applied: false,
    })
}

/// LLL reduction with parameter `delta` in `(1/4, 1]`.
pub fn lll_reduce(g: &GramMatrix, delta: &Rational) -> Result<ReductionReport> {
    let out = lll::lll_integral(g, delta)?;
    Ok(ReductionReport {
        reduced_gram: out.gram,
        transform: out.transform,
        iterations: out.swaps,
        swaps: out.swaps,
        violations_fixed: Vec::new(),
        lll_applied: true,
    })
}
