//! End-to-end runs of the `defcohom` binary: outputs, exit codes and report
//! determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use defcohom::cohomology::{ClassMembership, DeformedComplex};
use defcohom::fixtures;
use defcohom::scalars::rat;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../core/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_defcohom")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    (o.status.code().unwrap(), serde_json::from_str(&stdout(&o)).expect("valid JSON"))
}

#[test]
fn check_compatible_fixture_passes() {
    let o = run(&["check", &fixture("h.alg")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: PASS"));
}

#[test]
fn check_raw_transcription_fails_with_named_residual() {
    let o = run(&["check", &fixture("raw_bf.alg")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL d(d theta0) = 2*theta0^xi3^s33"), "{out}");
    assert!(out.contains("verdict: FAIL"));
}

#[test]
fn malformed_file_is_an_input_error_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.alg");
    std::fs::write(&path, "algebra bad\nform a b\nd a = a^^b\nd b = 0\n").unwrap();
    let o = run(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn missing_file_and_bad_flags_are_input_errors() {
    assert_eq!(run(&["check", "/nonexistent/x.alg"]).status.code(), Some(2));
    assert_eq!(run(&["cohomology", "h.alg", "--degree", "2", "--lambda", "1/0"]).status.code(), Some(2));
    assert_eq!(run(&["cohomology", "h.alg", "--degree", "2", "--lambda", "1", "--zeta", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify-coords", "nosuchfixture", "--all"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn non_closed_zeta_is_reported_with_residual() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nc.alg");
    std::fs::write(&path, "algebra nc\nform a b\nclosed z = b\nd a = 0\nd b = a^b\n").unwrap();
    let o = run(&["cohomology", path.to_str().unwrap(), "--degree", "1", "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("a^b"), "{err}");
}

#[test]
fn cohomology_examples() {
    let (code, v) = json(&["cohomology", &fixture("h.alg"), "--degree", "2", "--lambda", "-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["dimension"], 3);

    let (_, v) = json(&["cohomology", "bf.alg", "--degree", "2", "--generic"]);
    assert_eq!(v["results"]["dimension"], 0);
    assert_eq!(v["results"]["generic"], true);
}

#[test]
fn restricted_pkz_representative_is_cohomologous_to_the_printed_cocycle() {
    let (code, v) = json(&["cohomology", "pkz.alg", "--degree", "2", "--lambda", "-1/4", "--restrict-ideal"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["dimension"], 1);
    let reps = v["results"]["representatives"].as_array().unwrap();
    assert_eq!(reps.len(), 1);
    // Ω − c·rep is exact for the coordinate c of Ω.
    let p = fixtures::pkz();
    let rep = p.parse_form(reps[0].as_str().unwrap(), 2).unwrap();
    let omega = p.cocycle("omega").unwrap();
    let cx = DeformedComplex::with_default_mark(&p, true).unwrap();
    let ClassMembership::NontrivialClass { coordinates } = cx.class_membership(2, &rat(-1, 4), omega).unwrap() else {
        panic!("omega is not a nontrivial class");
    };
    let diff = omega.sub(&rep.scale(&coordinates[0])).unwrap();
    assert!(matches!(cx.class_membership(2, &rat(-1, 4), &diff).unwrap(), ClassMembership::Exact { .. }));
}

fn resonance_map(v: &Value) -> Vec<(String, u64)> {
    v["results"]["resonances"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["lambda"].as_str().unwrap().to_string(), r["dimension"].as_u64().unwrap()))
        .collect()
}

#[test]
fn resonance_examples() {
    let (code, v) = json(&["resonances", "h.alg", "--degree", "2"]);
    assert_eq!(code, 0);
    assert_eq!(
        resonance_map(&v),
        [("-3", 1), ("-2", 1), ("-1", 3), ("1", 2)].map(|(l, d)| (l.to_string(), d)).to_vec()
    );
    for args in [["pkz.alg", "--degree", "2", ""], ["pkz.alg", "--degree", "2", "--restrict-ideal"]] {
        let args: Vec<&str> = std::iter::once("resonances").chain(args.into_iter().filter(|a| !a.is_empty())).collect();
        let (_, v) = json(&args);
        assert_eq!(resonance_map(&v), vec![("-1/4".to_string(), 1)]);
    }
    let (_, v) = json(&["resonances", "bf.alg", "--degree", "2", "--restrict-ideal"]);
    assert_eq!(resonance_map(&v), vec![("-1".to_string(), 2)]);
    assert_eq!(v["results"]["generic_dimension"], 0);
}

#[test]
fn covering_examples() {
    let o = run(&["verify-covering", &fixture("pkz_covering.pde")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("off shell: u_tx + u_x*u_xx - u_yy"));

    let o = run(&["verify-covering", &fixture("bf_covering.pde")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("off shell: u_tx - u_yy*exp(u_y)"));

    let o = run(&["verify-covering", &fixture("broken_pkz_covering.pde")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("on shell:  -2*q_x*u_xy + 2*u_tx + 2*u_x*u_xx"));
}

#[test]
fn covering_without_relations_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plain.pde");
    std::fs::write(&path, "independent t x\ndependent u\nsolve u_t = u_xx\n").unwrap();
    assert_eq!(run(&["verify-covering", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn coordinate_examples() {
    for args in [
        ["verify-coords", "pkz", "--extension", "omega"],
        ["verify-coords", "bf", "--equation", "xi2"],
        ["verify-coords", "bf", "--extension", "omega2"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn coordinate_run_lists_unverifiable_items_separately() {
    let (code, v) = json(&["verify-coords", "bf", "--all"]);
    assert_eq!(code, 0);
    let checks = v["results"]["checks"].as_array().unwrap();
    let status = |s: &str| checks.iter().filter(|c| c["outcome"]["status"] == s).count();
    assert_eq!(status("pass"), 6);
    assert_eq!(status("fail"), 0);
    assert!(status("not_verifiable") > 0);

    // A single unverifiable equation verifies nothing.
    let o = run(&["verify-coords", "bf", "--equation", "theta2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not verifiable in coordinates"));
}

#[test]
fn coordinate_fixture_from_file_with_external_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let alg = dir.path().join("plane.alg");
    std::fs::write(&alg, "algebra plane\nform w1 w2\nclosed z = w1\nd w1 = 0\nd w2 = w1^w2\n").unwrap();
    let mcf = dir.path().join("plane.mcf");
    std::fs::write(&mcf, "fixture plane\nalgebra plane\nindependent x y\natoms x y\nform w1 = d(x)\nform w2 = exp(x)*d(y)\n").unwrap();
    let o = run(&["verify-coords", mcf.to_str().unwrap(), "--algebra", alg.to_str().unwrap(), "--all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    std::fs::write(&mcf, "fixture plane\nalgebra plane\nindependent x y\natoms x y\nform w1 = d(x)\nform w2 = exp(-x)*d(y)\n").unwrap();
    let o = run(&["verify-coords", mcf.to_str().unwrap(), "--algebra", alg.to_str().unwrap(), "--equation", "w2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL d w2"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["resonances", "h.alg", "--degree", "2", "--seed", "5", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["cohomology", "bf.alg", "--degree", "2", "--generic", "--seed", "11"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn text_and_json_carry_the_same_numbers() {
    let args = ["cohomology", "h.alg", "--degree", "2", "--lambda", "1"];
    let text = stdout(&run(&args));
    let (_, v) = json(&args);
    let r = &v["results"];
    assert!(text.contains(&format!("dimension: {}", r["dimension"])));
    assert!(text.contains(&format!(
        "cochains: {}, cocycles: {}, coboundaries: {}",
        r["cochain_dimension"], r["kernel_dimension"], r["image_dimension"]
    )));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"][0], "defcohom");
}

#[test]
fn shipped_files_match_embedded_fixtures() {
    for (name, _) in fixtures::embedded_files().iter().filter(|(n, _)| n.ends_with(".alg")) {
        let (c1, from_file) = json(&["check", &fixture(name)]);
        let (c2, embedded) = json(&["check", name]);
        assert_eq!(c1, c2, "{name}");
        assert_eq!(from_file["results"], embedded["results"], "{name}");
        assert_eq!(from_file["inputs"][0]["sha256"], embedded["inputs"][0]["sha256"], "{name}");
    }
}

#[test]
fn timing_is_opt_in() {
    let (_, v) = json(&["check", "h.alg"]);
    assert!(v.get("timing_ms").is_none());
    let (_, v) = json(&["check", "h.alg", "--timing"]);
    assert!(v["timing_ms"].is_u64());
}
