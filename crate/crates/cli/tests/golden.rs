//! Golden-file tests for the command-line front end. Set `UPDATE_GOLDEN=1`
//! to rewrite the expected files.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

const CASES: &[(&str, &[&str])] = &[
    ("shadow_f2", &["--field", "2^1", "shadow", "3"]),
    ("ktilde_f3", &["--field", "3", "--output", "json", "ktilde", "2,4,5"]),
    ("tau_linear", &["--field", "2^1", "tau", "x"]),
    ("tau_frobenius", &["--field", "3", "tau", "t^-2*x + t^-1*x^3"]),
    ("decompose_f3", &["--field", "3", "--output", "json", "decompose", "1 + x + x^3 + x^2/t + x^6"]),
    ("reduce_f3", &["--field", "3", "reduce", "t^-4*x^3 + x^2"]),
    ("hypothesis_f2", &["--field", "2", "--output", "json", "hypothesis", "2,4,12", "--irr", "2"]),
    ("expsum_linear", &["--field", "3", "--output", "json", "expsum", "x/t^2", "--N", "2"]),
    ("weyl_f2", &["--field", "2", "weyl", "x^3/t", "--N", "3", "--H", "2"]),
    ("hist_f2", &["--field", "2", "--output", "json", "hist", "x/t", "--N", "3", "--d", "1"]),
    ("approx_f2", &["--field", "2", "--output", "json", "approx", "1/(t^2 + t + 1)", "--G", "2"]),
    ("psi_f3", &["--field", "3", "psi", "2", "t^-1 + t^-3 + t^-6"]),
    ("split_f3", &["--field", "3", "--output", "json", "split", "t^-1"]),
    ("counterexample_f3", &["--field", "3^1", "--output", "json", "counterexample", "--gamma", "1/t", "--N", "3", "--H", "2"]),
    ("counterexample_f2", &["--field", "2", "counterexample", "--gamma", "1/t", "--N", "4", "--H", "2"]),
    ("selfcheck", &["--field", "3", "--seed", "11", "selfcheck", "--count", "5"]),
];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equidist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}

#[test]
fn outputs_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in CASES {
        let out = run(args);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let text = String::from_utf8(out.stdout).unwrap();
        let path = golden_path(name);
        if update {
            fs::write(&path, &text).unwrap();
            continue;
        }
        let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert_eq!(text, want, "{name}");
    }
}

#[test]
fn documented_examples() {
    let out = run(&["--field", "2^1", "shadow", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{1, 2, 3}\n");
    let out = run(&["--field", "2^1", "tau", "x"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1\n");
    let out = run(&["--field", "3^1", "--output", "json", "counterexample", "--gamma", "1/t", "--N", "3", "--H", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["full_sum"], 27);
    assert_eq!(v["tau_A_matches_gamma"], true);
}

#[test]
fn worker_count_does_not_change_output() {
    let base = run(&["--field", "3", "weyl", "x^4/t + x^2/t^2", "--N", "3", "--H", "2"]).stdout;
    for w in ["2", "4", "8"] {
        let out = run(&["--workers", w, "--field", "3", "weyl", "x^4/t + x^2/t^2", "--N", "3", "--H", "2"]);
        assert_eq!(out.stdout, base);
    }
}

#[test]
fn exit_codes() {
    let precision = run(&["expsum", "t^-1*x + t^-2*x !lo=-2", "--N", "3"]);
    assert_eq!(precision.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&precision.stderr).contains("required floor: -3"));

    for args in [
        &["expsum", "x^^", "--N", "2"][..],
        &["--field", "6", "shadow", "3"],
        &["shadow", "0"],
        &["tau", "x^3"],
        &["--lo", "0", "tau", "x"],
        &["expsum", "x"],
        &["frobnicate"],
        &["counterexample", "--gamma", "t", "--N", "2", "--H", "1"],
    ] {
        assert_eq!(run(args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
