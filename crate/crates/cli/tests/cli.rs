use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minkowski"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (v, out.status.code().unwrap())
}

fn strings(v: &Value) -> Vec<Vec<String>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_str().unwrap().to_string())
                .collect()
        })
        .collect()
}

#[test]
fn reduces_the_binary_fixture() {
    let (v, code) = json(&["reduce", &fixture("g_4_3_3_5.gram")]);
    assert_eq!(code, 0);
    assert_eq!(strings(&v["results"]["reduced_gram"]), [["3", "1"], ["1", "4"]]);
    assert_eq!(v["results"]["already_reduced"], false);
}

#[test]
fn check_reports_a_witness_and_succeeds() {
    let (v, code) = json(&["check", &fixture("g_4_3_3_5.gram")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["reduced"], false);
    let u = &v["results"]["witness"]["u"];
    let q = |x: i64, y: i64| 4 * x * x + 6 * x * y + 5 * y * y;
    let (x, y) = (u[0].as_i64().unwrap(), u[1].as_i64().unwrap());
    let index = v["results"]["witness"]["index"].as_u64().unwrap();
    assert!(q(x, y) < if index == 1 { 4 } else { 5 });
    assert_eq!(v["violations"].as_array().unwrap().len(), 1);
}

#[test]
fn definitional_reduce_leaves_the_nine_dimensional_basis() {
    let (v, code) = json(&["reduce", "--definitional", &fixture("example9_mnh.gram")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["already_reduced"], true);
    assert_eq!(v["results"]["dimension"], 9);
}

#[test]
fn svp_of_the_hexagonal_lattice() {
    let (v, code) = json(&["svp", &fixture("a2.gram")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["lambda_squared"], "2");
    assert_eq!(v["results"]["minima"].as_array().unwrap().len(), 3);
}

#[test]
fn voronoi_of_the_cubic_lattice() {
    let (v, code) = json(&["voronoi", &fixture("z3.gram")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["pairs"], 3);
}

#[test]
fn centering_of_the_half_sum() {
    let (v, code) = json(&["centering", &fixture("d4_half.basis")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["index_v"], "2");
    assert_eq!(v["results"]["class"]["u"], 2);
    assert_eq!(strings(&v["results"]["coset_reps"]), [["1/2"; 4]]);
}

#[test]
fn dump_tables_matches_the_golden_listing() {
    let golden = std::fs::read(fixture("../docs/tables/n4.txt")).unwrap();
    let a = run(&["dump-tables", "4"]);
    let b = run(&["dump-tables", "4"]);
    assert_eq!(a.stdout, golden);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_reports_have_a_fixed_shape() {
    let path = fixture("d4.gram");
    let (v, _) = json(&["svp", &path]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "input_sha256", "results", "violations"]);
    let expected: String = Sha256::digest(std::fs::read(&path).unwrap())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    assert_eq!(v["input_sha256"], expected.as_str());
    let (t, _) = json(&["svp", &path, "--timings"]);
    assert!(t["timings"].is_object());
    let (n, _) = json(&["example9"]);
    assert!(n["input_sha256"].is_null());
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["svp", "@Z3"]), 0);
    assert_eq!(code(&["reduce", &fixture("not_symmetric.gram")]), 3);
    assert_eq!(code(&["reduce", &fixture("indefinite.gram")]), 3);
    assert_eq!(code(&["reduce", "@Z7"]), 2);
    assert_eq!(code(&["reduce", "missing.gram"]), 2);
    assert_eq!(code(&["reduce", "@nonsense"]), 2);
    assert_eq!(code(&["theorem", "--model", "bogus"]), 2);
    assert_eq!(code(&["hermite", "@example9-mnh", "--budget", "2"]), 4);
    assert_eq!(code(&["hermite", "@example9-mnh"]), 0);
}

#[test]
fn errors_go_to_stderr() {
    let out = run(&["reduce", &fixture("not_symmetric.gram")]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}

#[test]
fn theorem_output_does_not_depend_on_workers() {
    let base = [
        "theorem", "--dim", "4", "--trials", "60", "--model", "mixed", "--seed", "9",
    ];
    let one = run(&[&base[..], &["--workers", "1"]].concat());
    let four = run(&[&base[..], &["--workers", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}
