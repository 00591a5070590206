use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jackcs"))
}

#[test]
fn energy_trig_example() {
    let out = bin()
        .args(["energy", "--N", "2", "--lambda", "2", "--n", "1,0", "--mode", "trig"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], serde_json::json!("5"));
    assert_eq!(v["mode"], serde_json::json!("trig"));
}

#[test]
fn jack_matches_oracle() {
    let out = bin()
        .args(["jack", "--N", "2", "--lambda", "1/2", "--n", "2,0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["matches_oracle"], serde_json::json!(true));
}

#[test]
fn deterministic_output() {
    let run = || {
        bin()
            .args(["verify", "--suite", "identities", "--seed", "7"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_identities_pass() {
    let out = bin()
        .args(["verify", "--suite", "identities", "--seed", "7"])
        .output()
        .unwrap();
    assert!(out.status.success(), "exit: {:?}", out.status);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], serde_json::json!(true));
}

#[test]
fn invalid_input_exit_code() {
    let out = bin()
        .args(["energy", "--N", "1", "--lambda", "2", "--n", "1", "--mode", "trig"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // malformed rational
    let out = bin()
        .args(["energy", "--N", "2", "--lambda", "x", "--n", "1,0", "--mode", "trig"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn degenerate_case_exit_code() {
    // fixed-point route hits the integer-coupling degeneracy at K >= 3
    let out = bin()
        .args([
            "energy", "--N", "2", "--lambda", "2", "--n", "1,0", "--mode",
            "elliptic-formal", "--K", "3", "--method", "fixed",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // the shifted Lagrange expansion clears it
    let out = bin()
        .args([
            "energy", "--N", "2", "--lambda", "2", "--n", "1,0", "--mode",
            "elliptic-formal", "--K", "3", "--method", "lagrange", "--a", "1/2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("jackcs-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "N=2\nlambda=2\nn=1,0\nmode=trig\n").unwrap();
    let out = bin()
        .args(["energy", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], serde_json::json!("5"));
    // flag wins over the config value
    let out = bin()
        .args([
            "energy",
            "--config",
            cfg.to_str().unwrap(),
            "--lambda",
            "1",
        ])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], serde_json::json!("5/2"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cache_transparency() {
    let dir = std::env::temp_dir().join(format!("jackcs-cache-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let plain = bin()
        .args(["jack", "--N", "2", "--lambda", "2", "--n", "2,1"])
        .output()
        .unwrap();
    let cached1 = bin()
        .args(["jack", "--N", "2", "--lambda", "2", "--n", "2,1"])
        .args(["--cache", dir.to_str().unwrap()])
        .output()
        .unwrap();
    let cached2 = bin()
        .args(["jack", "--N", "2", "--lambda", "2", "--n", "2,1"])
        .args(["--cache", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(plain.stdout, cached1.stdout);
    assert_eq!(plain.stdout, cached2.stdout);
    // one entry landed in the cache
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn out_file_and_text_format() {
    let dir = std::env::temp_dir().join(format!("jackcs-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("poly.txt");
    let out = bin()
        .args(["f", "--N", "2", "--lambda", "2", "--m", "2,0", "--format", "text"])
        .args(["--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    // f_{(2,0)} = 3 M(2,0) + 2 M(1,1) at λ = 2
    assert!(text.contains("M(2,0)"), "{text}");
    assert!(text.contains("(3)"), "{text}");
    std::fs::remove_dir_all(&dir).ok();
}
