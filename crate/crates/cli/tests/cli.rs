use std::io::Write;
use std::process::{Command, Output, Stdio};

fn hform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hform")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn normal_form() {
    let o = hform(&["nf", "x2*x1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x1*x2 - h*x1*y2 + h*y1*x2 + h^2*y1*y2");
    assert_eq!(stdout(&hform(&["nf", "x1*y1"])), "x1*y1");
    assert_eq!(stdout(&hform(&["--h0", "nf", "x2*x1"])), "x1*x2");
}

#[test]
fn stdin_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hform")).args(["nf", "-"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(b"y1*x1\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "x1*y1 - h*y1^2");
}

#[test]
fn action() {
    assert_eq!(stdout(&hform(&["act", "--op", "h", "x1*x2"])), "2*x1*x2 - h*x1*y2 + h*y1*x2");
    assert_eq!(stdout(&hform(&["act", "--op", "e", "br(1,2)"])), "0");
}

#[test]
fn invariant_exit_codes() {
    assert_eq!(hform(&["invariant", "br(1,2)"]).status.code(), Some(0));
    assert_eq!(hform(&["invariant", "x1"]).status.code(), Some(1));
}

#[test]
fn parse_errors_exit_two() {
    let o = hform(&["nf", "x1*+"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 4"));
    assert_eq!(hform(&["nf", "br(1,"]).status.code(), Some(2));
    assert_eq!(hform(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn bracket_identities() {
    assert_eq!(hform(&["verify-bracket", "(12)*(34) - (13)*(24) + (14)*(23)"]).status.code(), Some(0));
    assert_eq!(hform(&["verify-bracket", "(12)*(34) - (13)*(24)"]).status.code(), Some(1));
}

#[test]
fn coefficients_and_non_forms() {
    let o = hform(&["coeffs", "br(0,1)*br(0,2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("A0 = y1*y2"));
    assert_eq!(hform(&["coeffs", "x0^2*y1"]).status.code(), Some(2));
}

#[test]
fn json_schema() {
    let o = hform(&["--json", "commutators", "br(0,1)*br(0,2)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "commutators");
    for key in ["inputs", "result", "timing_ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["result"]["(1,0)"][0], serde_json::json!([0, 0, "-2*h"]));
}

#[test]
fn polarization_and_symbols() {
    assert_eq!(stdout(&hform(&["polarize", "--src", "0", "--dst", "3", "br(0,1)"])), stdout(&hform(&["nf", "br(3,1)"])));
    let o = hform(&["invariant-from-symbol", "--symbol", "d2", "--form", "br(0,1)*br(0,2)"]);
    assert_eq!(o.status.code(), Some(0));
    let inv = stdout(&o);
    assert_eq!(hform(&["invariant", "--", &inv]).status.code(), Some(0));
}

#[test]
fn quadratic_solver() {
    let o = hform(&["--json", "solve2", "br(0,1)*br(0,2)"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["points"].as_array().unwrap().len(), 2);
    assert!(v["result"]["checks"].as_array().unwrap().iter().all(|c| c["verdict"] == "holds"));
}

#[test]
fn differential() {
    let o = hform(&["--h0", "diff", "--vars", "0,5", "d[br(0,5)]"]);
    assert_eq!(stdout(&o), "y5*dx0 - x5*dy0 - y0*dx5 + x0*dy5");
}

#[test]
fn timeout_exits_one() {
    assert_eq!(hform(&["--timeout-ms", "1", "solve3", "br(0,1)*br(0,2)*br(0,3)"]).status.code(), Some(1));
}

#[test]
fn abel_suite() {
    assert_eq!(hform(&["abel", "--g", "1", "--s", "3", "--p", "0", "--q", "1"]).status.code(), Some(0));
    assert_eq!(hform(&["abel", "--g", "2", "--s", "5", "--p", "0", "--q", "1"]).status.code(), Some(2));
}

#[test]
fn selftest_single_criterion() {
    let o = hform(&["selftest", "--only", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS  1."));
    assert_eq!(hform(&["selftest", "--only", "11"]).status.code(), Some(2));
}
