use std::process::{Command, Output};

fn phipoisson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phipoisson"))
        .args(args)
        .env_remove("PHIPOISSON_TOLERANCES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn default_run_matches_golden_table() {
    let out = phipoisson(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let golden = include_str!("golden/default.txt");
    assert_eq!(stdout(&out), golden);
}

#[test]
fn json_is_byte_identical_across_runs() {
    let a = phipoisson(&["verify", "--format", "json", "--seed", "11"]);
    let b = phipoisson(&["verify", "--format", "json", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let serial = phipoisson(&["verify", "--format", "json", "--seed", "11", "--threads", "1"]);
    let w: serde_json::Value = serde_json::from_slice(&serial.stdout).unwrap();
    assert_eq!(
        serde_json::to_string(&v["instances"]).unwrap(),
        serde_json::to_string(&w["instances"]).unwrap()
    );
    let c1 = &v["instances"][1]["solutions"][0]["coefficients"][0];
    assert!(c1["re"].is_number() && c1["im"].is_number());
}

#[test]
fn perturbation_flags_mcybe_and_exits_one() {
    let out = phipoisson(&["verify", "--instance", "F4:3:4", "--perturb", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/mcybe"));
}

#[test]
fn empty_instance_list_exits_two() {
    let dir = std::env::temp_dir().join(format!("phipoisson-empty-{}", std::process::id()));
    std::fs::write(&dir, "instances = []\n").unwrap();
    let out = phipoisson(&["verify", "--config", dir.to_str().unwrap()]);
    std::fs::remove_file(&dir).ok();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(phipoisson(&["verify", "--instance", "E8:9:2"]).status.code(), Some(2));
    assert_eq!(phipoisson(&["verify", "--instance", "nonsense"]).status.code(), Some(2));
    assert_eq!(phipoisson(&["verify", "--accept", "1e-3", "--reject", "1e-6"]).status.code(), Some(2));
    assert_eq!(phipoisson(&["roots", "Q7"]).status.code(), Some(2));
    assert_eq!(phipoisson(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn environment_tolerance_is_overridden_by_flags() {
    let run = |env: &str, extra: &[&str]| {
        let mut args = vec!["verify", "--instance", "G2:1:3", "--format", "json"];
        args.extend_from_slice(extra);
        let o = Command::new(env!("CARGO_BIN_EXE_phipoisson"))
            .args(&args)
            .env("PHIPOISSON_TOLERANCES", env)
            .output()
            .unwrap();
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["config"]["tolerances"]["accept"].as_f64().unwrap()
    };
    assert_eq!(run("1e-11,1e-7", &[]), 1e-11);
    assert_eq!(run("1e-11,1e-7", &["--accept", "1e-10"]), 1e-10);
}

#[test]
fn roots_listing() {
    let e8 = stdout(&phipoisson(&["roots", "E8"]));
    assert!(e8.contains("roots 240"));
    let g2 = stdout(&phipoisson(&["roots", "G2"]));
    assert!(g2.contains("highest root (3,2)"));
    let a1 = stdout(&phipoisson(&["roots", "A1"]));
    assert!(a1.contains("roots 2\n"));
}

#[test]
fn selftest_exit_codes() {
    let clean = phipoisson(&["selftest", "--seed", "7"]);
    assert_eq!(clean.status.code(), Some(0), "{}", stdout(&clean));
    assert_eq!(stdout(&clean), stdout(&phipoisson(&["selftest", "--seed", "7"])));
    assert_eq!(phipoisson(&["selftest", "--corrupt-signs"]).status.code(), Some(1));
}
