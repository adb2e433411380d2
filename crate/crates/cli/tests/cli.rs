use std::process::{Command, Output};

use serde_json::Value;

fn prepol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prepol"))
        .args(args)
        .env_remove("PREPOL_WORKERS")
        .output()
        .expect("binary runs")
}

#[test]
fn verify_e6_r3_writes_an_all_pass_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = prepol(&["verify", "--family", "e6_1", "--node", "3", "--smax", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    for (r, s) in reports.iter().zip(1..) {
        assert_eq!(r["s"], s);
        assert!(r["conditions"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    }
    // Only the report itself is left behind.
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn reports_are_byte_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let base = ["verify", "--family", "e6_2", "--smax", "2"];
    let run = |w: &str, p: &std::path::Path| {
        let mut args = base.to_vec();
        args.extend(["--workers", w, "--out", p.to_str().unwrap()]);
        assert_eq!(prepol(&args).status.code(), Some(0));
    };
    run("1", &a);
    run("4", &b);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn decompose_twisted_level_one() {
    let o = prepol(&["decompose", "--family", "e6_2", "--node", "4", "--s", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 3);
    assert!(entries.iter().all(|e| e["mult"] == 1 && e["weight"].is_object()));
}

#[test]
fn decompose_sources_agree_on_e7() {
    let get = |src: &str| {
        let o = prepol(&["decompose", "--family", "e7_1", "--node", "2", "--s", "2", "--source", src]);
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    assert_eq!(get("kleber"), get("closed"));
}

#[test]
fn norm_prints_normal_form_and_norm() {
    let o = prepol(&["norm", "--family", "e6_1", "--node", "3", "--s", "1", "E6 E5 E4 E2 E0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("norm: 1 + q^2"), "{text}");
    let o = prepol(&["norm", "--family", "e6_1", "--node", "3", "--s", "1", "F0 F2 F4 F3"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("normal form: 0") && text.contains("certificate: weight"), "{text}");
}

#[test]
fn selftest_passes() {
    let o = prepol(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for suite in ["qlaurent", "rootdata", "classrep"] {
        assert!(text.contains(&format!("{suite}: PASS")), "{text}");
    }
}

#[test]
fn config_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("prepol.toml");
    std::fs::write(&cfg, "cases = [\"f4_1:4\"]\nformat = \"text\"\n[smax]\ndefault = 2\n").unwrap();
    let o = prepol(&["--config", cfg.to_str().unwrap(), "verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("F4_1 r=4 s=2") && !text.contains("s=3"), "{text}");
    assert!(text.ends_with("all conditions pass\n"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--smax", "0"][..],
        &["verify", "--family", "e6_1", "--node", "4"],
        &["verify", "--frobnicate"],
        &["decompose", "--family", "g2", "--node", "1", "--s", "1"],
        &["norm", "--family", "e6_1", "--node", "3", "--s", "1", "X9"],
        &["--workers", "0", "selftest"],
    ] {
        assert_eq!(prepol(args).status.code(), Some(2), "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "smax = \"three\"\n").unwrap();
    assert_eq!(prepol(&["--config", cfg.to_str().unwrap(), "verify"]).status.code(), Some(2));
}

#[test]
fn workers_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_prepol"))
        .args(["selftest"])
        .env("PREPOL_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
