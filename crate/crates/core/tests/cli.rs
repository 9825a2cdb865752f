use std::process::{Command, Output};

use serde_json::Value;

fn kahler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kahler")).args(args).output().expect("spawn kahler")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = kahler(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

const DECIDE: &[&str] = &["decide", "--domain", "CH1", "--metric", "dual_g", "--alpha", "2", "--mu", "1/2"];

#[test]
fn decide_dual_metric_on_disc() {
    let v = json(DECIDE);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "decide");
    let r = &v["result"];
    assert_eq!(r["decision"]["verdict"], false);
    assert_eq!(r["agree"], true);
    assert_eq!(r["series"]["verdict"], "REFUTED");
    assert_eq!(r["series"]["base_degree"], 2);
    assert_eq!(r["series"]["fiber_degree"], 1);
    assert_eq!(r["series"]["witness"]["value"], "-1/4");

    let text = stdout(&kahler(DECIDE));
    assert!(text.contains("NOT induced"));
    assert!(text.contains("pivot -1/4"));
}

#[test]
fn su3_minors_are_printed() {
    let o = kahler(&["flag", "minors", "--group", "SU3", "--black", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("Z^3 = 0"));
    assert!(text.contains(
        "Delta_1 = 1 + 1*z2*z2bar + 1*z1*z1bar + 1/2*z2*z1bar*z3bar + 1/2*z1*z3*z2bar + 1/4*z1*z3*z1bar*z3bar"
    ));
    assert!(text.contains(
        "Delta_2 = 1 + 1*z3*z3bar + 1*z2*z2bar + -1/2*z2*z1bar*z3bar + -1/2*z1*z3*z2bar + 1/4*z1*z3*z1bar*z3bar"
    ));
}

#[test]
fn verify_paper_passes_at_order_8() {
    let v = json(&["verify-paper", "--order", "8"]);
    let checks = v["result"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 11);
    for c in checks {
        assert_ne!(c["status"], "fail", "{c}");
    }
}

#[test]
fn verify_paper_single_check() {
    let v = json(&["verify-paper", "--check", "3"]);
    let checks = v["result"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["status"], "refuted_as_expected");
}

#[test]
fn exit_codes() {
    assert_eq!(kahler(&["wallach", "--domain", "CH2", "--x", "3"]).status.code(), Some(0));
    assert_eq!(kahler(&["--help"]).status.code(), Some(0));
    // computation failure
    assert_eq!(kahler(&["flag", "monomial", "--group", "SU4", "--black", "1,2"]).status.code(), Some(1));
    // usage errors
    let o = kahler(&["decide", "--domain", "CH1", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(kahler(&["nonsense"]).status.code(), Some(2));
    assert_eq!(kahler(&["wallach", "--domain", "Q7", "--x", "1"]).status.code(), Some(2));
    assert_eq!(kahler(&["expand", "psi", "--a", "2", "--b", "2", "--k", "1"]).status.code(), Some(2));
    assert_eq!(kahler(&["--order", "17", "expand", "psi", "--a", "1", "--b", "2", "--k", "1"]).status.code(), Some(2));
}

#[test]
fn output_is_byte_stable() {
    for args in [
        DECIDE.to_vec(),
        vec!["--json", "flag", "verdict", "--group", "SO7", "--black", "2"],
        vec!["--json", "expand", "psi", "--a", "1", "--b", "2", "--k", "1"],
        vec!["--json", "dual", "--domain", "CH1", "--metric", "g", "--mu", "2"],
        vec!["--json", "ch", "blocks", "--domain", "CH1", "--metric", "ghat"],
    ] {
        let a = kahler(&args);
        let b = kahler(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn psi_expansion_json_carries_the_witness() {
    let v = json(&["expand", "psi", "--a", "1", "--b", "2", "--k", "1"]);
    let r = &v["result"];
    assert_eq!(r["raw"][2], "-1/4");
    assert_eq!(r["first_negative"]["index"], 2);
}

#[test]
fn curvature_json_dumps_polynomials() {
    let v = json(&["curvature", "hideyuki", "--check", "h"]);
    assert_eq!(v["result"]["h_at_zero"], "3");
    assert!(v["result"]["p"].is_array() || v["result"]["p"].is_string());
}
