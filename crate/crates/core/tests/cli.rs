use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slp-membership"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decide_and_oracle_agree_on_generated_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut seen = [false; 2];
    for seed in 0..12 {
        let prefix = dir.path().join(format!("i{seed}"));
        let out = cli(&["gen", "--seed", &seed.to_string(), "--out", path(&prefix)]);
        assert!(out.status.success());
        let slp = prefix.with_extension("slp");
        let decide = cli(&["decide", path(&slp)]).status.code().unwrap();
        let oracle = cli(&["oracle", path(&slp)]).status.code().unwrap();
        let naive = cli(&["decide", path(&slp), "--engine", "naive"]).status.code().unwrap();
        assert!(decide == 0 || decide == 1);
        assert_eq!(decide, oracle, "seed {seed}");
        assert_eq!(decide, naive, "seed {seed}");
        seen[decide as usize] = true;
    }
    assert_eq!(seen, [true, true]);
}

#[test]
fn combined_file_and_explicit_automaton_path() {
    let dir = tempfile::tempdir().unwrap();
    let combined = dir.path().join("x.inst");
    let out = cli(&["gen", "--seed", "5"]);
    std::fs::write(&combined, &out.stdout).unwrap();
    let a = cli(&["decide", path(&combined)]).status.code();

    let prefix = dir.path().join("y");
    cli(&["gen", "--seed", "5", "--out", path(&prefix)]);
    let renamed = dir.path().join("other.txt");
    std::fs::rename(prefix.with_extension("aut"), &renamed).unwrap();
    let b = cli(&["decide", path(&prefix.with_extension("slp")), path(&renamed)]).status.code();
    assert_eq!(a, b);
    assert!(cli(&["check", path(&combined)]).status.success());
}

#[test]
fn trace_is_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.inst");
    std::fs::write(&file, cli(&["gen", "--seed", "9", "--n", "12", "--max-rhs-len", "6"]).stdout).unwrap();
    let out = cli(&["decide", path(&file), "--trace"]);
    let stderr = String::from_utf8(out.stderr).unwrap();
    let events: Vec<serde_json::Value> = stderr.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(events.iter().any(|e| e["event"] == "iteration"));
    assert!(events.iter().all(|e| e["event"] == "pass" || e["event"] == "iteration"));
}

#[test]
fn stats_reports_classes() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.inst");
    std::fs::write(&file, cli(&["gen", "--seed", "2"]).stdout).unwrap();
    let out = cli(&["stats", path(&file)]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["outer_left", "outer_right", "crossing", "non_crossing", "block_lengths_by_letter"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.inst");
    std::fs::write(&bad, "slp n=2\nX1 -> a\nX2 -> X3\n---\nstates 0\nstart 0\naccept 0\n").unwrap();
    let out = cli(&["check", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert_eq!(cli(&["decide", path(&dir.path().join("missing.slp"))]).status.code(), Some(2));

    let big = dir.path().join("big.inst");
    std::fs::write(&big, cli(&["gen", "--seed", "1", "--n", "10", "--log2-len", "16"]).stdout).unwrap();
    let out = cli(&["oracle", path(&big), "--max-expand", "4"]);
    assert_eq!(out.status.code(), Some(2));
}
