use std::fs;

use quotfib::cli::run;
use serde_json::Value;

fn quotfib(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("quotfib").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn census_reports_total() {
    let (code, out, _) = quotfib(&["census", "--n", "2", "--r", "2", "--q", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("7 subspaces"), "{out}");
    assert!(out.contains("PASS closed-form total"));
}

#[test]
fn census_json_matches_text_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("census.json");
    let (code, out, _) = quotfib(&["census", "--n", "3", "--r", "2", "--q", "3", "--shards", "4", "--json", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["subcommand"], "census");
    assert_eq!(v["results"]["total"], 40);
    for verdict in v["verdicts"].as_array().unwrap() {
        assert!(out.contains(&format!("PASS {}", verdict["check"].as_str().unwrap())));
    }
}

#[test]
fn phi_involution_passes() {
    let (code, out, _) = quotfib(&["phi", "--check-involution"]);
    assert_eq!(code, 0);
    assert!(out.contains("PASS involution"));
    assert!(out.contains("m1^6*m4^2"));

    let (code, out, _) = quotfib(&["phi"]);
    assert_eq!(code, 0);
    assert!(out.contains("K_X + A_2 + A_4 + G"));
    assert!(out.contains("H_3 -> A_4 + G"));
}

#[test]
fn chart_equations_n3() {
    let (code, out, _) = quotfib(&["chart-equations", "--n", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("9 equations"));
    assert!(out.contains("PASS residual hypersurface"));
}

#[test]
fn chart_equations_with_bad_golden_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eqs.txt");
    fs::write(&path, "a^2 + d + c*g\n").unwrap();
    let (code, out, _) = quotfib(&["chart-equations", "--n", "3", "--golden", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL golden equations"));
}

#[test]
fn kernel_and_transition() {
    let (code, out, _) = quotfib(&["kernel", "--e", "1+2*t", "--h", "3+4*t", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("(-4*t - 3, 2*t + 1)"));

    let (code, _, err) = quotfib(&["kernel", "--e", "t", "--h", "2*t", "--n", "2", "--q", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("neither e nor h is a unit"), "{err}");

    let (code, out, _) = quotfib(&["transition", "--coords", "2,1,1", "--n", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("(1/2, -1/4, -1/8)"));
}

#[test]
fn normal_form_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let edge = dir.path().join("edge.txt");
    fs::write(&edge, "x, x + y\n0, 1\n").unwrap();
    let (code, out, _) = quotfib(&["normal-form", "--shape", "edge", "--matrix", edge.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("[x, 0]"), "{out}");
    assert!(out.contains("det = x, beta = [0:1]"));

    let deg3 = dir.path().join("deg3.txt");
    fs::write(&deg3, "x^2, y^2\nx, y\n").unwrap();
    let (code, out, _) = quotfib(&["normal-form", "--shape", "deg3", "--matrix", deg3.to_str().unwrap(), "--q", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("beta = (1:0:0:1)"));
    assert!(out.contains("PASS kernel consistency"));
}

#[test]
fn quadric_and_strata() {
    let (code, out, _) = quotfib(&["quadric-count", "--q", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("13 points"));
    let (code, out, _) = quotfib(&["strata", "--r", "2", "--n", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("single point"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(quotfib(&["census", "--n", "2"]).0, 2);
    assert_eq!(quotfib(&["census", "--n", "2", "--r", "2", "--q", "4"]).0, 2);
    assert_eq!(quotfib(&["no-such-command"]).0, 2);
    assert_eq!(quotfib(&["normal-form", "--shape", "cube", "--matrix", "x"]).0, 2);
    assert_eq!(quotfib(&["--help"]).0, 0);
}

#[test]
fn budget_refusal_is_reported() {
    // the n = 4, r = 3 enumeration exceeds a tiny budget
    std::env::set_var("QUOTFIB_BUDGET", "1000");
    let (code, _, err) = quotfib(&["census", "--n", "4", "--r", "3", "--q", "2"]);
    std::env::remove_var("QUOTFIB_BUDGET");
    assert_eq!(code, 2);
    assert!(err.contains("shards"), "{err}");
}

#[test]
fn reproduce_with_corrupted_golden_fails_only_the_equations_check() {
    let dir = tempfile::tempdir().unwrap();
    let eqs = quotfib::chart_eqs::N3_GOLDEN.replace("-a^2 - d - g*c", "-a^2 + d - g*c");
    fs::write(dir.path().join("chart_equations_n3.txt"), eqs).unwrap();
    fs::write(dir.path().join("pullbacks.txt"), quotfib::report::PULLBACK_GOLDEN).unwrap();
    let json = dir.path().join("report.json");
    let (code, out, _) = quotfib(&[
        "reproduce-paper",
        "--golden-dir",
        dir.path().to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    for key in ["subcommand", "inputs", "results", "verdicts"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let failed: Vec<&str> = v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["pass"] == false)
        .map(|x| x["check"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["chart-equations"]);
    assert_eq!(out.matches("FAIL").count(), 1);
    assert_eq!(out.matches("PASS").count(), 12);
}
