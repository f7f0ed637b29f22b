use std::path::PathBuf;
use std::process::{Command, Output};

use wpbailey_core::identities::{registry, IdentityInfo};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wpbailey")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wpbailey-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn list_identities_round_trips() {
    let out = run(&["list", "identities", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let infos: Vec<IdentityInfo> = serde_json::from_slice(&out.stdout).unwrap();
    let expected: Vec<String> = registry().iter().filter(|i| i.expectation.holds()).map(|i| i.id.clone()).collect();
    let got: Vec<String> = infos.iter().map(|i| i.id.clone()).collect();
    assert_eq!(got, expected);
}

#[test]
fn list_with_misprints_is_longer() {
    let plain = run(&["list", "identities", "--format", "json"]);
    let all = run(&["list", "identities", "--format", "json", "--include-misprints"]);
    let n = |o: &Output| serde_json::from_slice::<Vec<IdentityInfo>>(&o.stdout).unwrap().len();
    assert!(n(&all) > n(&plain));
}

#[test]
fn passing_identity_exits_zero() {
    let out = run(&["verify", "tele_a", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "pass");
    assert!(v["elapsed_ms"].is_null());
}

#[test]
fn misprint_exits_one_with_witness() {
    let out = run(&["verify", "burge_8phi7_verbatim", "--include-misprints", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "fail");
    assert_eq!(v["witness"]["kind"], "point");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "no_such_identity"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "burge_rr1", "--backend", "exact"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "all", "--backend", "exact"]).status.code(), Some(2));
    assert_eq!(run(&["pair-check", "mz01", "--steps", "sideways"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "tele_a", "--ratio-cap", "2"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn pinned_coordinate() {
    let out = run(&["verify", "burge_rr1", "--pin", "k=3/5", "--trials", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn pair_check_through_steps() {
    let out = run(&["pair-check", "mz01", "--steps", "first:rho1=ry^2,rho2=rz^2;dual", "--format", "json", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["path"].as_array().unwrap().len(), 2);
}

#[test]
fn tree_lists_every_node() {
    let out = run(&["tree", "mz01", "--steps", "second;dual", "--format", "json", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[test]
fn config_file_and_out() {
    let cfg = scratch("cfg.toml");
    std::fs::write(&cfg, "seed = 7\ntrials = 2\nn_set = [0, 1, 2]\n").unwrap();
    let dest = scratch("report.json");
    let out = run(&["verify", "tele_b", "--config", cfg.to_str().unwrap(), "--format", "json", "--out", dest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["config"]["trials"], 2);
    assert_eq!(v["config"]["N_set"], serde_json::json!([0, 1, 2]));

    // flags override the file
    let out = run(&["verify", "tele_b", "--config", cfg.to_str().unwrap(), "--seed", "9", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 9);
}

#[test]
fn unknown_config_key_is_rejected() {
    let cfg = scratch("bad.toml");
    std::fs::write(&cfg, "seeed = 7\n").unwrap();
    assert_eq!(run(&["verify", "tele_a", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "sv_special", "--format", "json", "--seed", "11"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn timing_adds_elapsed() {
    let out = run(&["verify", "tele_a", "--format", "json", "--timing"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["elapsed_ms"].is_u64());
}
