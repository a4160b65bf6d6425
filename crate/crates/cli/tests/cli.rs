use std::path::Path;
use std::process::{Command, Output};

fn mtt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtt")).args(args).env_remove("MTT_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn corpus(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(rel).to_string_lossy().into_owned()
}

#[test]
fn check_exit_codes() {
    assert_eq!(mtt(&["check", &corpus("pos/bool_ops.mtt")]).status.code(), Some(0));
    let bad = mtt(&["check", &corpus("neg/unbound_variable.mtt")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unbound_variable.mtt:2:16: unbound variable"));
    let missing = mtt(&["check", "/nonexistent/file.mtt"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn verbose_check_prints_types_and_normal_forms() {
    let out = mtt(&["check", "-v", &corpus("pos/nat_arith.mtt")]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.contains(" : ")), "{text}");
    assert!(text.lines().any(|l| l.starts_with("  = ")), "{text}");
}

#[test]
fn eval_prints_values() {
    assert_eq!(stdout(&mtt(&["eval", "2/3 + 1/3"])), "1");
    assert_eq!(stdout(&mtt(&["eval", "if true then false else true"])), "false");
    let path = mtt(&["eval", "happly (funext (\\x. seg x) : Id (R+ -> R+) (\\x. 0) (\\x. x)) 4"]);
    assert_eq!(stdout(&path), "{shape = 1; samples = [0, 1, 2, 3, 4]}");
}

#[test]
fn eval_reports_type_errors() {
    let out = mtt(&["eval", "true + 1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("<expr>:1:"));
}

#[test]
fn eval_sees_file_definitions() {
    let out = mtt(&["eval", "-f", &corpus("pos/not_involutive.mtt"), "not (not true)"]);
    assert_eq!(stdout(&out), "true");
}

#[test]
fn laws_report_is_json_and_deterministic() {
    let args = ["laws", "--filter", "groupoid.unit,bounded.zero", "--count", "30"];
    let a = mtt(&args);
    assert!(a.status.success());
    let reports: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let ids: Vec<_> = reports.as_array().unwrap().iter().map(|r| r["law"].as_str().unwrap().to_string()).collect();
    assert_eq!(ids, ["groupoid.unit", "bounded.zero"]);
    assert_eq!(a.stdout, mtt(&args).stdout);
}

#[test]
fn seed_comes_from_the_environment_by_default() {
    let args = ["laws", "--filter", "bounded.eta", "--count", "50", "--mutate", "min"];
    let with_env =
        |seed: &str| Command::new(env!("CARGO_BIN_EXE_mtt")).args(args).env("MTT_SEED", seed).output().unwrap();
    let (a, b) = (with_env("7"), with_env("0x7"));
    assert_eq!(a.stdout, b.stdout);
    let flag = mtt(&[&args[..], &["--seed", "7"]].concat());
    assert_eq!(a.stdout, flag.stdout);
    assert_ne!(a.stdout, with_env("8").stdout);
}

#[test]
fn mutation_makes_laws_fail_with_exit_one() {
    let out = mtt(&["laws", "--filter", "groupoid.reverse-involution", "--count", "200", "--mutate", "truncated-sub"]);
    assert_eq!(out.status.code(), Some(1));
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports[0]["passed"], false);
    assert!(reports[0]["counterexample"].is_object());
}

#[test]
fn list_respects_ring_restrictions() {
    let rationals = stdout(&mtt(&["laws", "--list"]));
    let integers = stdout(&mtt(&["laws", "--list", "--ring", "integers"]));
    assert!(!rationals.contains("degeneracy."));
    assert!(integers.contains("degeneracy.step-path"));
}
