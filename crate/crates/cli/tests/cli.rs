mod common;

use common::{curve, hilbheis, s, write};
use hilbheis_core::heisenberg::free_quartet;
use hilbheis_core::io::{read_json, read_quartet, write_quartet};
use hilbheis_core::macdonald::PoincareFamily;
use hilbheis_core::models::p1_quartet;
use hilbheis_core::{BigradedSpace, Rational, Slice};
use serde_json::{json, Value};
use tempfile::tempdir;

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name} in {report}"))
}

#[test]
fn verify_generated_p1() {
    let dir = tempdir().unwrap();
    let out = curve(dir.path(), "p1", r#"{"type":"p1","N":6}"#);
    let r = hilbheis(&["verify", "--input", s(&out.join("quartet.json")), "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report = r.json();
    assert_eq!(report["passed"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 7);
}

#[test]
fn verify_corrupted_block() {
    let dir = tempdir().unwrap();
    let mut q = p1_quartet(6);
    q.mu_plus_c.block_mut(Slice::new(2, 2)).unwrap()[(0, 0)] = Rational::zero();
    let path = dir.path().join("q.json");
    write_quartet(&path, &q).unwrap();
    let r = hilbheis(&["verify", "--input", s(&path)]);
    assert_eq!(r.code, 1);
    assert!(
        r.stderr.contains("[mu_minus_pt, mu_plus_C] = id: fails at slice (2,2)"),
        "{}",
        r.stderr
    );
}

#[test]
fn verify_malformed_json() {
    let dir = tempdir().unwrap();
    let path = write(dir.path(), "bad.json", "{\"truncation\": 2, ");
    assert_eq!(hilbheis(&["verify", "--input", s(&path)]).code, 2);
    let missing = dir.path().join("absent.json");
    assert_eq!(hilbheis(&["verify", "--input", s(&missing)]).code, 2);
}

#[test]
fn decompose_p1() {
    let dir = tempdir().unwrap();
    let out = curve(dir.path(), "p1", r#"{"type":"p1","N":5}"#);
    let r = hilbheis(&["decompose", "--input", s(&out.join("quartet.json"))]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("W = {(0,0):1}"));
    let r = hilbheis(&["decompose", "--input", s(&out.join("quartet.json")), "--format", "json"]);
    let report = r.json();
    assert_eq!(report["w"], json!([[0, 0, 1]]));
    assert_eq!(check(&report, "stabilization")["passed"], true);
    assert_eq!(check(&report, "macdonald-identity")["passed"], true);
}

#[test]
fn decompose_recovers_free_fixture() {
    let dir = tempdir().unwrap();
    let mut w = BigradedSpace::new(2);
    w.set_dim(Slice::new(0, 0), 1);
    w.set_dim(Slice::new(1, 1), 2);
    w.set_dim(Slice::new(2, 2), 1);
    let path = dir.path().join("free.json");
    write_quartet(&path, &free_quartet(&w, 4)).unwrap();
    let r = hilbheis(&["decompose", "--input", s(&path), "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report = r.json();
    assert_eq!(report["w"], json!([[0, 0, 1], [1, 1, 2], [2, 2, 1]]));
    assert_eq!(report["d_graded"]["poly"]["genus"], 1);
}

#[test]
fn decompose_rank_deficient_fixture() {
    let dir = tempdir().unwrap();
    let mut q = p1_quartet(4);
    q.mu_plus_c.block_mut(Slice::new(0, 1)).unwrap()[(0, 0)] = Rational::zero();
    let path = dir.path().join("q.json");
    write_quartet(&path, &q).unwrap();
    let r = hilbheis(&["decompose", "--input", s(&path)]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("(0,1)"), "{}", r.stderr);
}

#[test]
fn curve_outputs() {
    let dir = tempdir().unwrap();
    let cusp = curve(dir.path(), "cusp", r#"{"type":"semigroup","generators":[2,3],"N":12}"#);
    let z: Value = read_json(&cusp.join("euler.json")).unwrap();
    assert_eq!(z["coeffs"], json!([1, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24]));
    assert_eq!((z["g"].clone(), z["g_tilde"].clone()), (json!(1), json!(0)));
    assert!(!cusp.join("poincare.json").exists());

    let smooth = curve(dir.path(), "smooth", r#"{"type":"smooth","genus":2,"N":6}"#);
    let p: PoincareFamily = read_json(&smooth.join("poincare.json")).unwrap();
    assert_eq!(p.truncation(), 6);
    assert_eq!(p.poly(1), &[1, 4, 1]);

    let p1 = curve(dir.path(), "p1", r#"{"type":"p1","N":6}"#);
    assert_eq!(read_quartet(&p1.join("quartet.json")).unwrap(), p1_quartet(6));
    assert_eq!(hilbheis(&["verify", "--input", s(&p1.join("quartet.json"))]).code, 0);
}

#[test]
fn curve_enumeration_cap() {
    let dir = tempdir().unwrap();
    let spec = write(
        dir.path(),
        "big.json",
        r#"{"type":"semigroup","generators":[2,3],"N":26}"#,
    );
    let r = hilbheis(&["curve", "--input", s(&spec)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--force"));
    let r = hilbheis(&["curve", "--input", s(&spec), "--force", "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["euler"]["coeffs"][26], 52);
}

#[test]
fn curve_rejects_bad_specs() {
    let dir = tempdir().unwrap();
    for spec in [
        r#"{"type":"semigroup","generators":[4,6],"N":5}"#,
        r#"{"type":"semigroup","N":5}"#,
        r#"{"type":"smooth","N":5}"#,
        r#"{"type":"torus","N":5}"#,
    ] {
        let p = write(dir.path(), "spec.json", spec);
        assert_eq!(hilbheis(&["curve", "--input", s(&p)]).code, 2, "{spec}");
    }
}

#[test]
fn jobs_do_not_change_output() {
    let dir = tempdir().unwrap();
    let spec = write(
        dir.path(),
        "s.json",
        r#"{"type":"semigroup","generators":[3,4],"N":14}"#,
    );
    let one = hilbheis(&["curve", "--input", s(&spec), "--format", "json"]);
    let four = hilbheis(&["curve", "--input", s(&spec), "--format", "json", "--jobs", "4"]);
    assert_eq!(one.code, 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn bps_examples() {
    let dir = tempdir().unwrap();
    let cusp = curve(dir.path(), "cusp", r#"{"type":"semigroup","generators":[2,3],"N":8}"#);
    let r = hilbheis(&["bps", "--input", s(&cusp.join("euler.json")), "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report = r.json();
    assert_eq!(report["bps"]["ng"]["n"], json!([2, 1]));
    assert_eq!(report["bps"]["ng_prime"]["n"], json!([2, 1]));
    assert_eq!(check(&report, "q-symmetry")["passed"], true);
    assert_eq!(check(&report, "ng-equals-ng-prime")["passed"], true);

    let node = curve(dir.path(), "node", r#"{"type":"node","N":8}"#);
    let r = hilbheis(&["bps", "--input", s(&node.join("euler.json"))]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("n  = [1, 1]"));
    assert!(r.stdout.contains("L(q) = 1 - q + q^2"));

    let r = hilbheis(&["bps", "--input", s(&cusp.join("euler.json")), "--truncation", "1"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("insufficient truncation"));
}

#[test]
fn bps_writes_report() {
    let dir = tempdir().unwrap();
    let cusp = curve(dir.path(), "cusp", r#"{"type":"semigroup","generators":[2,3],"N":6}"#);
    let out = dir.path().join("report.json");
    let r = hilbheis(&[
        "bps",
        "--input",
        s(&cusp.join("euler.json")),
        "--output",
        s(&out),
        "--format",
        "json",
    ]);
    assert_eq!(r.code, 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), r.stdout);
}

#[test]
fn macdonald_examples() {
    let dir = tempdir().unwrap();
    let smooth = curve(dir.path(), "smooth", r#"{"type":"smooth","genus":1,"N":4}"#);
    let d_path = dir.path().join("d.json");
    let r = hilbheis(&[
        "macdonald",
        "--input",
        s(&smooth.join("poincare.json")),
        "--genus",
        "1",
        "--direction",
        "inv",
        "--output",
        s(&d_path),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("PASS  duality"));
    let d: Value = read_json(&d_path).unwrap();
    assert_eq!(d, json!({"genus": 1, "coeffs": [[0, 0, 1], [1, 1, 2], [2, 2, 1]]}));

    let one = write(dir.path(), "one.json", r#"{"genus":0,"coeffs":[[0,0,1]]}"#);
    let fam = dir.path().join("fam.json");
    let r = hilbheis(&[
        "macdonald",
        "--input",
        s(&one),
        "--direction",
        "fwd",
        "--truncation",
        "4",
        "--output",
        s(&fam),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let p: PoincareFamily = read_json(&fam).unwrap();
    for n in 0..=4 {
        let expect: Vec<u64> = (0..=2 * n).map(|i| u64::from(i % 2 == 0)).collect();
        assert_eq!(p.poly(n), expect.as_slice());
    }

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"N":3,"polys":[[1],[1,3,1],[1,2,2,2,1],[1,2,2,2,2,2,1]]}"#,
    );
    let r = hilbheis(&["macdonald", "--input", s(&bad), "--genus", "1", "--direction", "inv"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("macdonald-transform"), "{}", r.stderr);
    assert!(r.stderr.contains("(i,n) = (1,2)"), "{}", r.stderr);
}

#[test]
fn report_runs_every_stage() {
    let dir = tempdir().unwrap();
    let spec = write(dir.path(), "p1.json", r#"{"type":"p1","N":4}"#);
    let r = hilbheis(&["report", "--input", s(&spec), "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report = r.json();
    for name in [
        "ng-equals-ng-prime",
        "macdonald-transform",
        "duality",
        "decomposition",
        "stabilization",
    ] {
        assert_eq!(check(&report, name)["passed"], true, "{name}");
    }
    let spec = write(
        dir.path(),
        "t.json",
        r#"{"type":"semigroup","generators":[2,5],"N":10}"#,
    );
    let r = hilbheis(&["report", "--input", s(&spec), "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["bps"]["ng"]["n"], json!([3, 4, 1]));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempdir().unwrap();
    let spec = write(dir.path(), "p1.json", r#"{"type":"p1","N":5}"#);
    let a = hilbheis(&["report", "--input", s(&spec), "--format", "json"]);
    let b = hilbheis(&["report", "--input", s(&spec), "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let x = curve(dir.path(), "x", r#"{"type":"p1","N":5}"#);
    let y = curve(dir.path(), "y", r#"{"type":"p1","N":5}"#);
    for f in ["euler.json", "poincare.json", "quartet.json"] {
        assert_eq!(
            std::fs::read(x.join(f)).unwrap(),
            std::fs::read(y.join(f)).unwrap(),
            "{f}"
        );
    }
}
