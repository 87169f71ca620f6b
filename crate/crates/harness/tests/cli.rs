//! End-to-end smoke tests for the `prophet` binary.

use std::process::Command;

fn prophet() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prophet"))
}

#[test]
fn usage_on_no_args() {
    let out = prophet().output().expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage"));
}

#[test]
fn list_algorithms_names_every_binding() {
    let out = prophet().arg("list-algorithms").output().expect("binary runs");
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["rank1", "blockwise", "graphic-kp", "transversal-dp", "gv", "free-order", "rehearsal", "p-matching"] {
        assert!(text.contains(name), "missing algorithm {name}");
    }
    assert!(text.contains("1 - O(1/sqrt k)"));
}

#[test]
fn verify_rejects_unknown_suites() {
    let out = prophet().args(["verify", "bogus"]).output().expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_order_lemma_exits_zero() {
    let out = prophet().args(["verify", "order-lemma"]).output().expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS worst-order"));
}

#[test]
fn run_writes_deterministic_reports() {
    let dir = std::env::temp_dir().join(format!("prophet-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let config_path = dir.join("experiment.json");
    let prefix = dir.join("report");
    let config = serde_json::json!({
        "environment": {"kind": "graphic", "vertices": 4,
                        "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]},
        "distribution": {"family": {"family": "uniform", "lo": 0.0, "hi": 1.0}, "n": 6},
        "algorithm": "graphic-kp",
        "order": {"strategy": "random"},
        "trials": 200,
        "seed": 12345,
        "output": prefix.to_str().expect("utf-8 path"),
    });
    std::fs::write(&config_path, serde_json::to_string_pretty(&config).expect("json"))
        .expect("write config");

    let mut bodies = Vec::new();
    for _ in 0..2 {
        let out = prophet()
            .args(["run", config_path.to_str().expect("utf-8 path")])
            .output()
            .expect("binary runs");
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let json = std::fs::read_to_string(format!("{}.json", prefix.display()))
            .expect("json report written");
        let csv = std::fs::read_to_string(format!("{}.csv", prefix.display()))
            .expect("csv report written");
        assert!(csv.starts_with("trial,welfare,revenue,winners\n"));
        assert_eq!(csv.lines().count(), 201);
        // byte-identical modulo the wall clock
        let mut value: serde_json::Value = serde_json::from_str(&json).expect("valid json");
        value["wall_clock_ms"] = serde_json::json!(0);
        bodies.push(serde_json::to_string(&value).expect("json"));
    }
    assert_eq!(bodies[0], bodies[1], "reports must be byte-identical up to the wall clock");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn run_reports_config_errors() {
    let dir = std::env::temp_dir().join(format!("prophet-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let config_path = dir.join("bad.json");
    // algorithm/environment mismatch: rehearsal needs a uniform environment
    let config = serde_json::json!({
        "environment": {"kind": "graphic", "vertices": 3, "edges": [[0, 1], [1, 2]]},
        "distribution": {"family": {"family": "uniform", "lo": 0.0, "hi": 1.0}, "n": 2},
        "algorithm": "rehearsal",
        "order": {"strategy": "random"},
        "trials": 5,
        "seed": 1,
    });
    std::fs::write(&config_path, config.to_string()).expect("write config");
    let out = prophet()
        .args(["run", config_path.to_str().expect("utf-8 path")])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    std::fs::remove_dir_all(&dir).ok();
}
