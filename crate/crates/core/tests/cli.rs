use std::process::Command;

use affvir::cli::Report;

fn affvir(args: &[&str]) -> (Option<i32>, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_affvir")).args(args).output().unwrap();
    (out.status.code(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn zero_window_is_invalid() {
    let (code, out, err) = affvir(&["--type", "A1", "--window", "0"]);
    assert_eq!(code, Some(2));
    assert!(out.is_empty());
    assert!(err.contains("error"));
}

#[test]
fn out_of_range_degree_is_invalid() {
    assert_eq!(affvir(&["--window", "3", "--degrees", "2", "--task", "derive"]).0, Some(2));
}

#[test]
fn unknown_type_is_invalid() {
    assert_eq!(affvir(&["--type", "Q7", "--task", "build"]).0, Some(2));
}

#[test]
fn center_json() {
    let (code, out, _) = affvir(&["--type", "A1", "--window", "4", "--task", "center", "--format", "json"]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["center_dim"], 2);
    assert_eq!(v["basis"], serde_json::json!(["K1", "K2"]));
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn json_reports_round_trip() {
    for task in ["build", "jacobi", "lemmas", "derive", "bider", "postlie"] {
        let (code, out, _) = affvir(&["--window", "3", "--task", task, "--format", "json"]);
        assert_eq!(code, Some(0), "{task}");
        let r: Report = serde_json::from_str(&out).unwrap();
        assert!(r.passed);
        assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", out);
    }
}

#[test]
fn selectors_have_centers() {
    for (sel, dim) in [("GTilde", 1), ("Vir", 1), ("GHat", 0), ("Quotient", 0), ("SimpleG", 0)] {
        let (code, out, _) = affvir(&["--window", "3", "--task", "center", "--selector", sel, "--format", "json"]);
        assert_eq!(code, Some(0), "{sel}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["center_dim"], dim, "{sel}");
    }
}

#[test]
fn text_output_is_deterministic() {
    let args = ["--type", "A2", "--window", "3", "--task", "bider", "--degrees", "0", "--symmetry", "skew"];
    let (code, a, _) = affvir(&args);
    assert_eq!(code, Some(0));
    assert_eq!(a, affvir(&args).1);
    assert!(a.contains("[PASS] bider.full.skew[n=0]"));
}

#[test]
fn postlie_needs_three() {
    assert_eq!(affvir(&["--window", "2", "--task", "postlie"]).0, Some(2));
    let (code, out, _) = affvir(&["--window", "2", "--task", "all"]);
    assert_eq!(code, Some(0));
    assert!(out.contains("postlie: skipped"));
}
