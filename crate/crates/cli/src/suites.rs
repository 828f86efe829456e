//! Seeded randomized property suites.
//!
//! Every suite is a pure function of its seed and trial count; the worker
//! count only changes the schedule.

use std::collections::{BTreeMap, BTreeSet};

use minkowski::centering::{
    centering_data, check_theorem_bound, classify_centering, half_centered_face, TheoremReport,
};
use minkowski::enumeration::{enumerate_short_vectors, lattice_minimum};
use minkowski::exactlin::{apply_transform, inverse};
use minkowski::reduction::{is_minkowski_reduced_definitional, is_minkowski_reduced_table, minkowski_reduce, Verdict};
use minkowski::voronoi::{certify_minima_relevant, check_table4_membership, relevant_vectors};
use minkowski::{CoordVector, Error, GramMatrix, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Map, Value};

use crate::random::{random_sublattice, random_unimodular, trial_rng, Model, Stream};
use crate::report::{self, Report};
use crate::runner::run_trials;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: String,
    pub instances: usize,
    pub failures: Vec<String>,
    pub stats: Map<String, Value>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new("suite");
        r.put("suite", self.name.clone());
        r.put("instances", self.instances);
        r.put("failures", self.failures.len());
        for (k, v) in &self.stats {
            r.put(k, v.clone());
        }
        for f in &self.failures {
            r.violation(f.clone());
        }
        r
    }
}

/// What one trial contributes.
#[derive(Default)]
struct Tally {
    instances: usize,
    failures: Vec<String>,
    counts: BTreeMap<String, u64>,
    maxima: BTreeMap<String, u64>,
}

impl Tally {
    fn fail(&mut self, trial: usize, msg: impl std::fmt::Display) {
        self.failures.push(format!("trial {trial}: {msg}"));
    }

    fn count(&mut self, key: &str) {
        *self.counts.entry(key.to_string()).or_default() += 1;
    }

    fn max(&mut self, key: &str, v: u64) {
        let e = self.maxima.entry(key.to_string()).or_default();
        *e = (*e).max(v);
    }
}

fn collect(name: &str, tallies: Vec<Tally>) -> SuiteResult {
    let mut out = SuiteResult {
        name: name.to_string(),
        instances: 0,
        failures: Vec::new(),
        stats: Map::new(),
    };
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut maxima: BTreeMap<String, u64> = BTreeMap::new();
    for t in tallies {
        out.instances += t.instances;
        out.failures.extend(t.failures);
        for (k, v) in t.counts {
            *counts.entry(k).or_default() += v;
        }
        for (k, v) in t.maxima {
            let e = maxima.entry(k).or_default();
            *e = (*e).max(v);
        }
    }
    for (k, v) in counts {
        out.stats.insert(k, json!(v));
    }
    for (k, v) in maxima {
        out.stats.insert(k, json!(v));
    }
    out
}

/// Runs `body` for each trial; an error ends that trial as a failure.
fn suite<F>(name: &str, trials: usize, workers: usize, body: F) -> SuiteResult
where
    F: Fn(usize, &mut Tally) -> Result<(), Error> + Sync + Send,
{
    let tallies = run_trials(workers, trials, |t| {
        let mut tally = Tally::default();
        if let Err(e) = body(t, &mut tally) {
            tally.fail(t, format!("error: {e}"));
        }
        tally
    });
    collect(name, tallies)
}

pub struct TheoremAggregate {
    pub report: TheoremReport,
    /// `(trial, vector)` for every counterexample.
    pub detail: Vec<(usize, CoordVector)>,
}

/// Reduces `trials` random forms and checks the coordinates of their minimum
/// vectors. Also returns how many trials reached each maximal coordinate.
pub fn theorem(
    seed: u64,
    dim: usize,
    trials: usize,
    workers: usize,
    model: Model,
) -> Result<(TheoremAggregate, BTreeMap<u64, usize>), Error> {
    let mut agg = TheoremAggregate {
        report: TheoremReport::empty(dim)?,
        detail: Vec::new(),
    };
    let per_trial = run_trials(workers, trials, |t| -> Result<TheoremReport, Error> {
        let g = model.sample(&mut trial_rng(seed, Stream::Theorem, dim, t), dim);
        let red = minkowski_reduce(&g)?;
        check_theorem_bound(&red.reduced_gram)
    });
    let mut histogram = BTreeMap::new();
    for (t, r) in per_trial.into_iter().enumerate() {
        let r = r?;
        *histogram.entry(r.max_abs_coordinate_seen).or_default() += 1;
        agg.detail.extend(r.counterexamples.iter().map(|v| (t, v.clone())));
        agg.report = agg.report.merge(r);
    }
    Ok((agg, histogram))
}

fn check_violation(g: &GramMatrix, verdict: &Verdict) -> Result<(), String> {
    let Some(v) = verdict.violation() else { return Ok(()) };
    let n = g.dim();
    if v.u.len() != n || v.u.is_zero() || v.index >= n {
        return Err(format!("malformed witness {v}"));
    }
    if v.u.tail_gcd(v.index) != 1 {
        return Err(format!(
            "witness {} cannot replace e{}",
            report::scalar_vector(&v.u),
            v.index + 1
        ));
    }
    if g.value(v.u.as_slice()) != v.q_u || *g.diag(v.index) != v.q_ei || v.q_u >= v.q_ei {
        return Err(format!("witness values do not check out: {v}"));
    }
    Ok(())
}

/// Small random change of a reduced form, kept when still positive definite.
fn nudge(g: &GramMatrix, rng: &mut impl Rng) -> Option<GramMatrix> {
    let n = g.dim();
    let mut m = g.entries().clone();
    let i = rng.gen_range(0..n);
    let j = rng.gen_range(0..n);
    let d = Rational::from_integer(if rng.gen_bool(0.5) { 1 } else { -1 }.into());
    m[(i, j)] += d.clone();
    if i != j {
        m[(j, i)] += d;
    }
    GramMatrix::new(m).ok()
}

/// The table check against the definitional check, on random forms, their
/// reductions and small perturbations of the reductions.
pub fn tammela(seed: u64, dim: usize, trials: usize, workers: usize) -> SuiteResult {
    let name = format!("tammela-equivalence-n{dim}");
    suite(&name, trials, workers, |t, tally| {
        let mut rng = trial_rng(seed, Stream::Tammela, dim, t);
        let raw = Model::Mixed.sample(&mut rng, dim);
        let red = minkowski_reduce(&raw)?.reduced_gram;
        let mut forms = vec![raw, red.clone()];
        forms.extend(nudge(&red, &mut rng));
        forms.extend(nudge(&red, &mut rng));
        for g in &forms {
            tally.instances += 1;
            let table = is_minkowski_reduced_table(g)?;
            let def = is_minkowski_reduced_definitional(g)?;
            if table.is_reduced() != def.is_reduced() {
                tally.fail(
                    t,
                    format!(
                        "table says {}, definition says {} for {g:?}",
                        table.is_reduced(),
                        def.is_reduced()
                    ),
                );
                continue;
            }
            tally.count(if table.is_reduced() { "reduced" } else { "not_reduced" });
            for v in [&table, &def] {
                if let Err(e) = check_violation(g, v) {
                    tally.fail(t, e);
                }
            }
        }
        Ok(())
    })
}

/// Largest `r` with `r^2 <= x`, for `x >= 0`.
fn floor_sqrt(x: &Rational) -> i64 {
    let f: BigInt = x.floor().to_integer();
    i64::try_from(f.sqrt()).unwrap_or(i64::MAX)
}

/// Per-coordinate radius of the box containing every `x` with `Q(x) <= bound`.
pub fn box_radius(g: &GramMatrix, bound: &Rational) -> Vec<i64> {
    let inv = inverse(g.entries()).expect("positive definite");
    (0..g.dim()).map(|i| floor_sqrt(&(bound * &inv[(i, i)]))).collect()
}

fn box_points(radius: &[i64], mut f: impl FnMut(&[i64])) {
    let n = radius.len();
    let mut x: Vec<i64> = radius.iter().map(|r| -r).collect();
    loop {
        f(&x);
        let mut i = 0;
        while i < n && x[i] == radius[i] {
            x[i] = -radius[i];
            i += 1;
        }
        if i == n {
            return;
        }
        x[i] += 1;
    }
}

const DIM2_BOX: i64 = 20;

/// Two-dimensional reduction against brute force on the box `|x_i| <= 20`.
///
/// Forms whose first two minima are not provably inside the box are redrawn.
pub fn dim2(seed: u64, trials: usize, workers: usize) -> SuiteResult {
    suite("dim2-oracle", trials, workers, |t, tally| {
        let mut rng = trial_rng(seed, Stream::Dim2, 2, t);
        let (g, red) = loop {
            let g = Model::Mixed.sample(&mut rng, 2);
            let red = minkowski_reduce(&g)?.reduced_gram;
            if box_radius(&g, red.diag(1)).iter().all(|&r| r <= DIM2_BOX) {
                break (g, red);
            }
            tally.count("redrawn");
        };
        tally.instances += 1;
        let mut l1: Option<(Rational, Vec<i64>)> = None;
        box_points(&[DIM2_BOX; 2], |x| {
            if x != [0, 0] {
                let q = g.value(x);
                if l1.as_ref().is_none_or(|(m, _)| q < *m) {
                    l1 = Some((q, x.to_vec()));
                }
            }
        });
        let (l1, v1) = l1.expect("box is nonempty");
        let mut l2: Option<Rational> = None;
        box_points(&[DIM2_BOX; 2], |x| {
            if x[0] * v1[1] != x[1] * v1[0] {
                let q = g.value(x);
                if l2.as_ref().is_none_or(|m| q < *m) {
                    l2 = Some(q);
                }
            }
        });
        let l2 = l2.expect("box spans the plane");
        if *red.diag(0) != l1 || *red.diag(1) != l2 {
            tally.fail(
                t,
                format!("reduced diagonal {:?} but minima {l1}, {l2}", red.diagonal()),
            );
        }
        let two_g12 = red.entry(0, 1).abs() * Rational::from_integer(2.into());
        if !(two_g12 <= *red.diag(0) && red.diag(0) <= red.diag(1)) {
            tally.fail(t, format!("reduced form {red:?} violates 2|g12| <= g11 <= g22"));
        }
        Ok(())
    })
}

/// Every minimum vector is relevant.
pub fn voronoi_minima(seed: u64, dim: usize, trials: usize, workers: usize) -> SuiteResult {
    suite(&format!("minima-relevant-n{dim}"), trials, workers, |t, tally| {
        let g = Model::Mixed.sample(&mut trial_rng(seed, Stream::Voronoi, dim, t), dim);
        tally.instances += 1;
        if !certify_minima_relevant(&g)? {
            tally.fail(t, format!("a minimum vector of {g:?} is not relevant"));
        }
        Ok(())
    })
}

/// Generic four-dimensional lattices have 15 relevant pairs.
pub fn voronoi_generic(seed: u64, trials: usize, workers: usize) -> SuiteResult {
    suite("generic-relevant-n4", trials, workers, |t, tally| {
        let g = Model::Dense(1000).sample(&mut trial_rng(seed, Stream::Voronoi, 40, t), 4);
        tally.instances += 1;
        let set = relevant_vectors(&g)?;
        tally.max("max_signed_count", set.signed_count() as u64);
        if set.signed_count() != 30 {
            tally.fail(t, format!("{} signed relevant vectors for {g:?}", set.signed_count()));
        }
        Ok(())
    })
}

/// Relevant vectors of reduced forms against the relevant-vector table.
pub fn voronoi_membership(seed: u64, dim: usize, trials: usize, workers: usize) -> SuiteResult {
    suite(&format!("table-membership-n{dim}"), trials, workers, |t, tally| {
        let mut rng = trial_rng(seed, Stream::Voronoi, 100 + dim, t);
        let red = minkowski_reduce(&Model::Mixed.sample(&mut rng, dim))?.reduced_gram;
        tally.instances += 1;
        let m = check_table4_membership(&red)?;
        tally.max("max_abs_coordinate", m.max_abs_coordinate);
        for v in &m.mismatches {
            tally.fail(
                t,
                format!("relevant vector {} is not in the table", report::scalar_vector(v)),
            );
        }
        if m.max_abs_coordinate > 4 {
            tally.fail(t, format!("relevant coordinate {}", m.max_abs_coordinate));
        }
        Ok(())
    })
}

/// `U | V`, parity of half-centered faces, and invariance of the
/// classification under reordering the sublattice basis.
pub fn centering(seed: u64, trials: usize, workers: usize) -> SuiteResult {
    suite("centering-random", trials, workers, |t, tally| {
        let n = 2 + t % 5;
        let mut rng = trial_rng(seed, Stream::Centering, n, t);
        let mut basis = random_sublattice(&mut rng, n, 2, 2048);
        tally.instances += 1;
        let data = centering_data(&basis)?;
        if !(&data.index_v % &data.denominator_u).is_zero() {
            tally.fail(
                t,
                format!("U = {} does not divide V = {}", data.denominator_u, data.index_v),
            );
        }
        if BigInt::from(data.coset_reps.len() + 1) != data.index_v {
            tally.fail(
                t,
                format!("{} cosets for index {}", data.coset_reps.len() + 1, data.index_v),
            );
        }
        if half_centered_face(&data).is_some() {
            tally.count("half_centered_faces");
            if (&data.index_v % 2u32).is_zero() {
                tally.count("even_index_with_half_face");
            } else {
                tally.fail(t, format!("half-centered face but odd index {}", data.index_v));
            }
        }
        let class = classify_centering(&data, n);
        if class.class().is_some() {
            tally.count("classified");
        }
        basis.shuffle(&mut rng);
        if classify_centering(&centering_data(&basis)?, n) != class {
            tally.fail(t, "classification changed under reordering");
        }
        Ok(())
    })
}

/// Determinant preservation, unimodular invariance of the minimum,
/// idempotence of reduction and enumeration against brute force.
pub fn invariance(seed: u64, dim: usize, trials: usize, workers: usize) -> SuiteResult {
    suite(&format!("invariance-n{dim}"), trials, workers, |t, tally| {
        let mut rng = trial_rng(seed, Stream::Invariance, dim, t);
        let g = Model::Mixed.sample(&mut rng, dim);
        tally.instances += 1;
        let rep = minkowski_reduce(&g)?;
        let red = &rep.reduced_gram;
        if red.determinant() != g.determinant() {
            tally.fail(t, "determinant changed by reduction");
        }
        if apply_transform(&g, &rep.transform)? != *red {
            tally.fail(t, "transform does not produce the reduced form");
        }
        let again = minkowski_reduce(red)?;
        if !again.transform.is_identity() || again.reduced_gram != *red {
            tally.fail(t, "reducing a reduced form changed it");
        }
        let u = random_unimodular(&mut rng, dim, 3 * dim, 2);
        let moved = apply_transform(&g, &u)?;
        let (m0, _) = lattice_minimum(&g)?;
        let (m1, _) = lattice_minimum(&moved)?;
        let (m2, _) = lattice_minimum(red)?;
        if m0 != m1 || m0 != m2 {
            tally.fail(t, format!("minimum not invariant: {m0}, {m1}, {m2}"));
        }
        if dim <= 4 {
            let bound = red.max_diagonal();
            let listed: BTreeSet<CoordVector> = enumerate_short_vectors(red, &bound)?.coords().cloned().collect();
            let mut brute = BTreeSet::new();
            box_points(&box_radius(red, &bound), |x| {
                let v = CoordVector::new(x.to_vec());
                if !v.is_zero() && v.is_canonical() && red.value(x) <= bound {
                    brute.insert(v);
                }
            });
            tally.max("max_short_vectors", brute.len() as u64);
            if listed != brute {
                tally.fail(
                    t,
                    format!(
                        "enumeration lists {} vectors, brute force {}",
                        listed.len(),
                        brute.len()
                    ),
                );
            }
        }
        Ok(())
    })
}
