use std::path::Path;
use std::process::{Command, Output};

use presstype_core::{read_samples, read_session, Symbol};

fn presstype(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_presstype"))
        .args(args)
        .env_remove("PRESSTYPE_CONFIG")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = presstype(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_replay_report() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("sim.jsonl");
    let samples = dir.path().join("sim.samples");
    ok(&[
        "simulate", "--target", "K", "--trials", "30", "--seed", "5", "--overshoot-sd", "0.0",
        "--tremor-sd", "0.0", "--out", s(&log), "--samples-out", s(&samples),
    ]);
    let simulated = read_session(std::fs::read(&log).unwrap().as_slice()).unwrap();
    assert_eq!(simulated.records.len(), 30);
    assert!(simulated.records.iter().all(|r| r.symbol == Symbol::Char('K')));

    // replaying the written samples gives the same bytes
    let replayed = dir.path().join("replayed.jsonl");
    ok(&["replay", s(&samples), "--out", s(&replayed)]);
    assert_eq!(std::fs::read(&log).unwrap(), std::fs::read(&replayed).unwrap());

    let table = ok(&["report", s(&log), "--target", "K", "--scale", "1.5"]);
    let table = String::from_utf8(table.stdout).unwrap();
    assert!(table.contains("error rate   0.0000 (0 of 30)"), "{table}");
    assert!(table.contains("at scale 1.5"));

    let lines = ok(&["report", s(&log), "--target", "K", "--format", "lines"]);
    let v: serde_json::Value = serde_json::from_slice(&lines.stdout).unwrap();
    assert_eq!(v["records"], 30);
    assert_eq!(v["errors"], 0);
    assert!(v["cpm"].as_f64().unwrap() > 0.0);
}

#[test]
fn replay_keep_idle_reassembles() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("sim.jsonl");
    let samples = dir.path().join("sim.samples");
    ok(&[
        "simulate", "--target", "SP", "--trials", "10", "--seed", "1", "--out", s(&log),
        "--samples-out", s(&samples),
    ]);
    let out = dir.path().join("full.jsonl");
    ok(&["replay", s(&samples), "--out", s(&out), "--keep-idle"]);
    let idle_path = dir.path().join("full.jsonl.idle");
    let log = read_session(std::fs::read(&out).unwrap().as_slice()).unwrap();
    let idle = read_samples(std::fs::read(&idle_path).unwrap().as_slice()).unwrap();
    let original = read_samples(std::fs::read(&samples).unwrap().as_slice()).unwrap();
    assert!(!idle.is_empty());
    assert_eq!(presstype_core::trace_io::reassemble(&log, &idle), original);
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("engine.toml");
    std::fs::write(&cfg, "remap_hi = 1.0\nlayout = [\"X\", \"Y\", \"Z\", \"BS\"]\n").unwrap();
    let log = dir.path().join("sim.jsonl");
    let run = |extra: &[&str]| {
        let mut args = vec!["simulate", "--target", "Y", "--trials", "3", "--out", s(&log)];
        args.extend_from_slice(extra);
        let out = Command::new(env!("CARGO_BIN_EXE_presstype"))
            .args(&args)
            .env("PRESSTYPE_CONFIG", &cfg)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        read_session(std::fs::read(&log).unwrap().as_slice()).unwrap()
    };
    let from_file = run(&[]);
    assert_eq!(from_file.config().remap.hi, 1.0);
    assert_eq!(from_file.layout().len(), 4);
    let flagged = run(&["--remap-hi", "0.8"]);
    assert_eq!(flagged.config().remap.hi, 0.8);
    assert_eq!(flagged.layout().len(), 4);
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.toml");
    std::fs::write(
        &grid,
        r#"
[[point]]
model = { target = "M", overshoot_sd = 0.0, tremor_sd = 0.0 }

[[point]]
config = { remap_hi = 1.0 }
model = { target = "M", overshoot_sd = 0.1, seed = 3 }
"#,
    )
    .unwrap();
    let out = dir.path().join("sweep.csv");
    ok(&["sweep", "--grid", s(&grid), "--trials", "50", "--out", s(&out)]);
    let mut reader = csv::Reader::from_path(&out).unwrap();
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][col("error_rate")], "0");
    assert_eq!(&rows[1][col("remap_hi")], "1");
    assert_eq!(&rows[1][col("trials")], "50");
    assert!(rows[1][col("error_rate")].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"version\":1}\nnot json\n").unwrap();
    let out = presstype(&["report", s(&bad), "--target", "A"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.jsonl"));

    let out = presstype(&["simulate", "--target", "!", "--out", s(&dir.path().join("x"))]);
    assert!(!out.status.success());
}
