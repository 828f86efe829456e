use std::fmt;
use std::time::Instant;

use minkowski::centering::{centering_data, classify_centering, half_centered_face, Classification};
use minkowski::corpus::{example9_gram, example9_reduced_not_hermite, named_lattice, LatticeFile, E8_STAR};
use minkowski::enumeration::{is_primitive_system, lattice_minimum, shortest_primitive_extension};
use minkowski::exactlin::rat;
use minkowski::reduction::{
    greedy_minkowski_basis, hermite_witness_search, is_minkowski_reduced_definitional, is_minkowski_reduced_table,
    lll_reduce, minkowski_reduce, HermiteOutcome, Verdict,
};
use minkowski::tables::{dump_tables, relevant_vector_candidates, tammela_reduction_candidates};
use minkowski::voronoi::{certify_minima_relevant, check_table4_membership, relevant_vectors};
use minkowski::{CoordVector, Error, GramMatrix, Rational, UnimodularTransform};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::random::Model;
use crate::report::{self, Exit, Outcome, Report};
use crate::runner::RunConfig;
use crate::suites;

/// Failure of a command before it could produce a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmdError {
    pub exit: Exit,
    pub message: String,
}

impl CmdError {
    pub fn usage(message: impl Into<String>) -> CmdError {
        CmdError {
            exit: Exit::Usage,
            message: message.into(),
        }
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> CmdError {
        CmdError {
            exit: Exit::for_error(&e),
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

type CmdResult = Result<Outcome, CmdError>;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug)]
pub struct Input {
    pub gram: GramMatrix,
    pub sha256: String,
}

/// Reads a lattice file, or a named lattice written as `@name`.
pub fn load_input(arg: &str) -> Result<Input, CmdError> {
    if let Some(name) = arg.strip_prefix('@') {
        return Ok(Input {
            gram: named_lattice(name)?,
            sha256: sha256_hex(name.as_bytes()),
        });
    }
    let bytes = std::fs::read(arg).map_err(|e| CmdError::usage(format!("cannot read {arg}: {e}")))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CmdError::usage(format!("{arg} is not UTF-8")))?;
    let file = LatticeFile::parse(&text)?;
    Ok(Input {
        gram: file.gram()?,
        sha256: sha256_hex(&bytes),
    })
}

fn report_for(command: &str, input: &Input) -> Report {
    let mut r = Report::new(command);
    r.input_sha256 = Some(input.sha256.clone());
    r
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

fn put_verdict(r: &mut Report, verdict: &Verdict) {
    r.put("reduced", verdict.is_reduced());
    if let Some(v) = verdict.violation() {
        r.put(
            "witness",
            json!({
                "u": report::vector(&v.u),
                "index": v.index + 1,
                "q_u": report::rational(&v.q_u),
                "q_e": report::rational(&v.q_ei),
            }),
        );
        r.violation(v.to_string());
    }
}

pub fn cmd_reduce(input: &Input, definitional: bool) -> CmdResult {
    let start = Instant::now();
    let g = &input.gram;
    let mut r = report_for("reduce", input);
    r.put("dimension", g.dim());
    r.put("method", if definitional { "definitional" } else { "table" });
    let rep = if definitional {
        if is_minkowski_reduced_definitional(g)?.is_reduced() {
            r.put("already_reduced", true);
            r.put("reduced_gram", report::gram(g));
            r.put("transform", report::transform(&UnimodularTransform::identity(g.dim())));
            r.put("iterations", 0);
            r.timings.push(("reduce".into(), elapsed_ms(start)));
            return Ok(Outcome::new(r, Exit::Ok));
        }
        greedy_minkowski_basis(g)?
    } else {
        minkowski_reduce(g)?
    };
    r.put("already_reduced", rep.transform.is_identity());
    r.put("reduced_gram", report::gram(&rep.reduced_gram));
    r.put("transform", report::transform(&rep.transform));
    r.put("iterations", rep.iterations);
    r.put("swaps", rep.swaps);
    r.put("lll_applied", rep.lll_applied);
    r.timings.push(("reduce".into(), elapsed_ms(start)));
    Ok(Outcome::new(r, Exit::Ok))
}

pub fn cmd_check(input: &Input, definitional: bool) -> CmdResult {
    let start = Instant::now();
    let g = &input.gram;
    let verdict = if definitional {
        is_minkowski_reduced_definitional(g)?
    } else {
        is_minkowski_reduced_table(g)?
    };
    let mut r = report_for("check", input);
    r.put("dimension", g.dim());
    r.put("method", if definitional { "definitional" } else { "table" });
    put_verdict(&mut r, &verdict);
    r.timings.push(("check".into(), elapsed_ms(start)));
    Ok(Outcome::new(r, Exit::Ok))
}

pub fn cmd_theorem(cfg: &RunConfig, model: Model) -> CmdResult {
    let start = Instant::now();
    let (agg, histogram) = suites::theorem(cfg.seed, cfg.dim, cfg.trials, cfg.workers, model)?;
    let mut r = Report::new("theorem");
    r.put("dimension", agg.report.dimension);
    r.put("seed", cfg.seed);
    r.put("model", model.name());
    r.put("trials", agg.report.trials);
    r.put("bound", agg.report.bound);
    r.put("max_abs_coordinate_seen", agg.report.max_abs_coordinate_seen);
    r.put(
        "max_abs_histogram",
        Value::Object(histogram.iter().map(|(k, v)| (k.to_string(), json!(v))).collect()),
    );
    let cand_max = relevant_vector_candidates(cfg.dim)?
        .iter()
        .map(|c| c.coords.max_abs())
        .max()
        .unwrap_or(0);
    r.put("relevant_candidate_max_abs", cand_max);
    r.put("counterexamples", agg.report.counterexamples.len());
    for (trial, v) in &agg.detail {
        r.violation(format!(
            "trial {trial}: minimum vector {} exceeds the bound {}",
            report::scalar_vector(v),
            agg.report.bound
        ));
    }
    r.timings.push(("theorem".into(), elapsed_ms(start)));
    let exit = if agg.report.holds() { Exit::Ok } else { Exit::Falsified };
    Ok(Outcome::new(r, exit))
}

struct Claim {
    name: &'static str,
    expected: String,
    observed: String,
}

impl Claim {
    fn holds(&self) -> bool {
        self.expected == self.observed
    }
}

pub fn cmd_example9(cfg: &RunConfig) -> CmdResult {
    let start = Instant::now();
    let g = example9_gram();
    let mut claims = Vec::new();

    let (lambda, minima) = lattice_minimum(&g)?;
    claims.push(Claim {
        name: "lambda_squared",
        expected: "1".into(),
        observed: lambda.to_string(),
    });
    let units_minimal = (0..9).all(|i| minima.coords().any(|v| *v == CoordVector::unit(9, i)));
    claims.push(Claim {
        name: "columns_are_minimal",
        expected: "true".into(),
        observed: units_minimal.to_string(),
    });
    let coeffs = [(0, 7), (0, 8), (7, 8)]
        .map(|(i, j)| g.entry(i, j).to_string())
        .join(" ");
    claims.push(Claim {
        name: "gram_g18_g19_g89",
        expected: "1/4 1/2 -1/6".into(),
        observed: coeffs,
    });

    let mut partial: Vec<CoordVector> = (0..7).map(|i| CoordVector::unit(9, i)).collect();
    partial.push(CoordVector::from(&E8_STAR[..]));
    claims.push(Claim {
        name: "e8_star_norm",
        expected: "1".into(),
        observed: g.value(&E8_STAR).to_string(),
    });
    claims.push(Claim {
        name: "partial_system_primitive",
        expected: "true".into(),
        observed: is_primitive_system(&partial)?.to_string(),
    });
    let ext = shortest_primitive_extension(&g, &partial)?;
    let ext_norm = g.value(ext.as_slice());
    claims.push(Claim {
        name: "shortest_extension_norm",
        expected: "7/6".into(),
        observed: ext_norm.to_string(),
    });

    let mnh = example9_reduced_not_hermite();
    claims.push(Claim {
        name: "mnh_minkowski_reduced",
        expected: "true".into(),
        observed: is_minkowski_reduced_definitional(&mnh)?.is_reduced().to_string(),
    });
    let hermite = hermite_witness_search(&mnh, cfg.budget)?;
    let (witness_profile, nodes) = match &hermite {
        HermiteOutcome::Witness {
            profile,
            nodes_explored,
            ..
        } => (
            profile.iter().map(Rational::to_string).collect::<Vec<_>>().join(" "),
            *nodes_explored,
        ),
        HermiteOutcome::NoneWithinBudget { nodes_explored, .. } => ("none".into(), *nodes_explored),
    };
    claims.push(Claim {
        name: "hermite_witness_profile",
        expected: ["1"; 9].join(" "),
        observed: witness_profile,
    });

    let mut r = Report::new("example9");
    for c in &claims {
        r.put(
            c.name,
            json!({"expected": c.expected, "observed": c.observed, "pass": c.holds()}),
        );
        if !c.holds() {
            r.violation(format!("{}: expected {}, observed {}", c.name, c.expected, c.observed));
        }
    }
    r.put("extension_vector", report::vector(&ext));
    r.put("hermite_nodes_explored", nodes);
    if let HermiteOutcome::Witness { basis, .. } = &hermite {
        r.put("hermite_witness_basis", report::vectors(basis));
    }
    r.put("budget", cfg.budget);
    r.timings.push(("example9".into(), elapsed_ms(start)));
    let exit = if claims.iter().all(Claim::holds) {
        Exit::Ok
    } else {
        Exit::Falsified
    };
    Ok(Outcome::new(r, exit))
}

pub fn cmd_voronoi(input: &Input) -> CmdResult {
    let start = Instant::now();
    let g = &input.gram;
    let set = relevant_vectors(g)?;
    let mut r = report_for("voronoi", input);
    r.put("dimension", g.dim());
    r.put("pairs", set.pair_count());
    r.put("signed_count", set.signed_count());
    r.put(
        "relevant",
        Value::Array(
            set.vectors
                .iter()
                .map(|(v, q)| json!({"vector": report::vector(v), "norm": report::rational(q)}))
                .collect(),
        ),
    );
    r.put("minima_relevant", certify_minima_relevant(g)?);
    if (2..=6).contains(&g.dim()) {
        match check_table4_membership(g) {
            Ok(m) => {
                r.put("table_membership", m.all_match());
                r.put("max_abs_coordinate", m.max_abs_coordinate);
                for v in &m.mismatches {
                    r.violation(format!(
                        "relevant vector {} matches no table column",
                        report::scalar_vector(v)
                    ));
                }
            }
            Err(Error::NotReduced(_)) => {
                r.put("table_membership", "skipped (input is not reduced)");
            }
            Err(e) => return Err(e.into()),
        }
    }
    r.timings.push(("voronoi".into(), elapsed_ms(start)));
    let exit = if r.violations.is_empty() {
        Exit::Ok
    } else {
        Exit::Falsified
    };
    Ok(Outcome::new(r, exit))
}

/// Reads a `basis n n` file of integer columns.
pub fn load_sub_basis(arg: &str) -> Result<(Vec<CoordVector>, String), CmdError> {
    let bytes = std::fs::read(arg).map_err(|e| CmdError::usage(format!("cannot read {arg}: {e}")))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CmdError::usage(format!("{arg} is not UTF-8")))?;
    let LatticeFile::Basis(b) = LatticeFile::parse(&text)? else {
        return Err(CmdError::usage("sub-basis file must be a `basis n n` file"));
    };
    let m = b.columns();
    if m.rows() != m.cols() {
        return Err(CmdError::usage("sub-basis must be square"));
    }
    let mut cols = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        let mut c = Vec::with_capacity(m.rows());
        for i in 0..m.rows() {
            let x = &m[(i, j)];
            let v = (x.is_integer())
                .then(|| num_traits::ToPrimitive::to_i64(x.numer()))
                .flatten()
                .ok_or_else(|| CmdError::usage(format!("sub-basis entry {x} is not a 64-bit integer")))?;
            c.push(v);
        }
        cols.push(CoordVector::new(c));
    }
    Ok((cols, sha256_hex(&bytes)))
}

pub fn cmd_centering(sub_basis: &[CoordVector], sha256: &str, lattice: Option<&Input>) -> CmdResult {
    let start = Instant::now();
    let n = sub_basis.len();
    let data = centering_data(sub_basis)?;
    let mut r = Report::new("centering");
    r.input_sha256 = Some(sha256.to_string());
    r.put("dimension", n);
    r.put("index_v", data.index_v.to_string());
    r.put("denominator_u", data.denominator_u.to_string());
    r.put("u_divides_v", (&data.index_v % &data.denominator_u) == 0.into());
    r.put(
        "coset_reps",
        Value::Array(data.coset_reps.iter().map(report::rationals).collect()),
    );
    r.put(
        "half_centered_face",
        half_centered_face(&data).map_or(Value::Null, report::rationals),
    );
    match classify_centering(&data, n) {
        Classification::Class(c) => r.put(
            "class",
            json!({
                "u": c.u,
                "v": c.v,
                "relevant_rows": c.relevant_rows.iter().map(report::rationals).collect::<Vec<_>>(),
            }),
        ),
        Classification::Unknown => r.put("class", "unknown"),
    };
    if let Some(l) = lattice {
        if l.gram.dim() != n {
            return Err(CmdError::usage(format!(
                "lattice has dimension {}, sub-basis {n}",
                l.gram.dim()
            )));
        }
        let norms: Vec<Rational> = sub_basis.iter().map(|v| l.gram.value(v.as_slice())).collect();
        r.put("sub_basis_norms", report::rationals(&norms));
    }
    r.timings.push(("centering".into(), elapsed_ms(start)));
    Ok(Outcome::new(r, Exit::Ok))
}

pub fn cmd_svp(input: &Input) -> CmdResult {
    let start = Instant::now();
    let (lambda, list) = lattice_minimum(&input.gram)?;
    let mut r = report_for("svp", input);
    r.put("dimension", input.gram.dim());
    r.put("lambda_squared", report::rational(&lambda));
    r.put("pairs", list.len());
    r.put("minima", report::vectors(list.coords()));
    r.timings.push(("svp".into(), elapsed_ms(start)));
    Ok(Outcome::new(r, Exit::Ok))
}

pub fn cmd_dump_tables(n: usize) -> CmdResult {
    let text = dump_tables(n)?;
    let mut r = Report::new("dump-tables");
    r.put("dimension", n);
    r.put("reduction_count", tammela_reduction_candidates(n)?.len());
    r.put("relevant_count", relevant_vector_candidates(n)?.len());
    r.put(
        "listing",
        Value::Array(text.lines().map(|l| Value::String(l.to_string())).collect()),
    );
    let mut out = Outcome::new(r, Exit::Ok);
    out.text = Some(text);
    Ok(out)
}

pub fn cmd_lll(input: &Input, delta: &Rational) -> CmdResult {
    let start = Instant::now();
    let rep = lll_reduce(&input.gram, delta)?;
    let mut r = report_for("lll", input);
    r.put("dimension", input.gram.dim());
    r.put("delta", report::rational(delta));
    r.put("reduced_gram", report::gram(&rep.reduced_gram));
    r.put("transform", report::transform(&rep.transform));
    r.put("swaps", rep.swaps);
    r.timings.push(("lll".into(), elapsed_ms(start)));
    Ok(Outcome::new(r, Exit::Ok))
}

pub fn cmd_hermite(input: &Input, budget: usize) -> CmdResult {
    let start = Instant::now();
    let out = hermite_witness_search(&input.gram, budget)?;
    let mut r = report_for("hermite", input);
    r.put("dimension", input.gram.dim());
    r.put("budget", budget);
    let exit = match out {
        HermiteOutcome::Witness {
            basis,
            profile,
            nodes_explored,
        } => {
            r.put("hermite_reduced", false);
            r.put("witness_basis", report::vectors(&basis));
            r.put("witness_profile", report::rationals(&profile));
            r.put("nodes_explored", nodes_explored);
            Exit::Ok
        }
        HermiteOutcome::NoneWithinBudget {
            nodes_explored,
            search_complete,
        } => {
            r.put(
                "hermite_reduced",
                if search_complete { json!(true) } else { json!("unknown") },
            );
            r.put("nodes_explored", nodes_explored);
            r.put("search_complete", search_complete);
            if search_complete {
                Exit::Ok
            } else {
                Exit::Cap
            }
        }
    };
    r.timings.push(("hermite".into(), elapsed_ms(start)));
    Ok(Outcome::new(r, exit))
}

pub fn cmd_gram(input: &Input) -> CmdResult {
    let file = LatticeFile::Gram(input.gram.clone());
    let mut r = report_for("gram", input);
    r.put("dimension", input.gram.dim());
    r.put("gram", report::gram(&input.gram));
    r.put("determinant", report::rational(&input.gram.determinant()));
    let mut out = Outcome::new(r, Exit::Ok);
    out.text = Some(file.to_text());
    Ok(out)
}

/// `delta` as `p/q`.
pub fn parse_delta(s: &str) -> Result<Rational, CmdError> {
    let d = minkowski::exactlin::parse_rational(s).ok_or_else(|| CmdError::usage(format!("invalid delta `{s}`")))?;
    if d <= rat(1, 4) || d > rat(1, 1) {
        return Err(CmdError::usage(format!("delta must satisfy 1/4 < delta <= 1, got {d}")));
    }
    Ok(d)
}
