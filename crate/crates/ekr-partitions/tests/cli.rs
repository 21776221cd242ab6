//! End-to-end runs of the binary: exit codes, format stability, the family
//! file round trip, and resumption from a torn result cache.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ekr-partitions"))
        .args(args)
        .output()
        .unwrap()
}

fn run_in(args: &[&str], cache: &Path) -> Output {
    let mut full: Vec<&str> = args.to_vec();
    let dir = cache.to_str().unwrap();
    full.extend(["--cache-dir", dir]);
    run(&full)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn text_outputs_carry_the_headline_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["stirling", "10", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "S(10, 3) = 9330\n");

    let out = run(&["family", "hm", "--spec", r#"{"n":6,"k":4,"t":1}"#, "--size"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "size = 19 (closed-form)\n");

    let out = run_in(&["enum", "5", "3", "--count-only"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("count = 25"), "{}", stdout(&out));

    let out = run(&["enum", "5", "3"]);
    assert_eq!(stdout(&out).lines().count(), 25);

    let out = run(&["tau", "--family", r#"{"kind":"alpha","n":6,"k":3,"t":1}"#, "-t", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("tau = 2"), "{}", stdout(&out));
}

#[test]
fn json_outputs_are_schema_stamped_and_parse() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["stirling", "9", "2", "--format", "json"],
        vec!["enum", "5", "3", "--count-only", "--format", "json"],
        vec!["covers", "--family", r#"{"kind":"alpha","n":6,"k":3,"t":1}"#, "-t", "1", "--format", "json"],
        vec!["search", "max", "4", "3", "1", "--format", "json"],
    ] {
        let out = run_in(&args, dir.path());
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["schema"], 1, "{args:?}");
        assert!(v["config"].is_string(), "{args:?}");
    }
}

#[test]
fn family_files_round_trip_through_the_cover_tools() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("alpha.jsonl");
    let out = run(&["family", "alpha", "--spec", r#"{"n":6,"k":3,"t":1}"#, "--materialize"]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&path, out.stdout).unwrap();

    let out = run(&["tau", "--family", path.to_str().unwrap(), "-t", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("tau = 2"), "{}", stdout(&out));

    let out = run(&["covers", "--family", path.to_str().unwrap(), "-t", "1", "--classify"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("core_below_t"), "{}", stdout(&out));
}

#[test]
fn isomorphism_sees_through_relabeling() {
    let left = r#"{"kind":"star","n":6,"k":3,"t":1,"anchor":"1"}"#;
    let right = r#"{"kind":"star","n":6,"k":3,"t":1,"anchor":"2"}"#;
    let out = run(&["search", "iso", left, right]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "isomorphic = true\n");

    let alpha = r#"{"kind":"alpha","n":6,"k":3,"t":1}"#;
    let out = run(&["search", "iso", left, alpha]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "isomorphic = false\n");
}

#[test]
fn verify_resumes_from_a_torn_cache_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--claim", "L2.1-ratio", "--grid", "k=2..4,n=4..12"];
    let cold = run_in(&args, dir.path());
    assert_eq!(cold.status.code(), Some(0), "{}", stderr(&cold));

    let cache_file = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|x| x == "jsonl"))
        .expect("cache file written");
    let full = std::fs::read(&cache_file).unwrap();
    assert!(full.ends_with(b"\n"));
    let text = String::from_utf8(full.clone()).unwrap();
    assert!(text.contains(r#""type":"done""#));

    // Tear the final line in half: the last slice loses its done marker and
    // is recomputed, the rest replays from cache.
    std::fs::write(&cache_file, &full[..full.len() - 30]).unwrap();
    let resumed = run_in(&args, dir.path());
    assert_eq!(resumed.status.code(), Some(0), "{}", stderr(&resumed));
    assert_eq!(cold.stdout, resumed.stdout);

    // Warm replay with the repaired complete cache.
    let warm = run_in(&args, dir.path());
    assert_eq!(warm.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
}

#[test]
fn report_rolls_up_caches_and_flags_failures() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(&["verify", "--claim", "L4.3-RD"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let out = run(&["report", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("L4.3-RD"), "{}", stdout(&out));

    // A cache whose run recorded a failing verdict turns the roll-up red.
    let fixture = concat!(
        r#"{"config":"verify claim=X grid=default seed=42","schema":1,"seed":42,"subcommand":"verify","type":"header"}"#,
        "\n",
        r#"{"key":"X|n=1","record":{"claim":"X","lhs":"0","mode":"exact","note":"fixture","pass":false,"point":"n=1","rhs":"1","tight":false},"schema":1,"type":"record","unit":"X"}"#,
        "\n",
    );
    std::fs::write(dir.path().join("verify-00000000deadbeef.jsonl"), fixture).unwrap();
    let out = run(&["report", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "--claim", "nope"],
        vec!["verify", "--claim", "L4.3-RD", "--grid", "t=1..2"],
        vec!["verify", "--claim", "all", "--grid", "n=5..9"],
        vec!["stirling", "3"],
        vec!["family", "star", "--spec", r#"{"n":6,"k":3}"#, "--size"],
        vec!["no-such-command"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}
