//! End-to-end tests of the binary: exit codes, certificate output, file
//! round-trips, and determinism under worker fan-out.

use std::path::Path;
use std::process::{Command, Output};

fn epcodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epcodes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn epcodes_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epcodes"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn verify_fano_on_its_hypergraph_exits_zero() {
    let out = epcodes(&["verify", "--code", "fano", "--hypergraph", "fano-complement"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("valid true"));
}

#[test]
fn verify_fano_on_complete_hypergraph_exits_one_with_witness() {
    let out = epcodes(&["verify", "--code", "fano", "--hypergraph", "complete:7:3"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("valid false"));
    assert!(text.contains("failing_edge 1 2 3"));
    assert!(text.contains("collision_message_a 0 0 0"));
    assert!(text.contains("collision_message_b 1 0 0"));
}

#[test]
fn fixtures_verify_at_their_tolerances() {
    for (name, graph, eps) in [
        ("q3-n20", "complete:20:2", "1/3"),
        ("q4-n7", "complete:7:2", "1/4"),
        ("q6-n6", "complete:6:2", "1/6"),
    ] {
        let out = epcodes(&["verify", "--code", name, "--hypergraph", graph, "--eps", eps]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stdout(&out));
    }
    // tighter tolerance than the construction affords
    let out = epcodes(&[
        "verify",
        "--code",
        "q4-n7",
        "--hypergraph",
        "complete:7:2",
        "--eps",
        "1/5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("min_success 3/4"));
}

#[test]
fn parse_errors_exit_two_and_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.hg");
    std::fs::write(&path, "3 2\n1 5\n").unwrap();
    let out = epcodes(&["verify", "--code", "fano", "--hypergraph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("line 2"), "{err}");

    let out = epcodes(&["verify", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fixtures_list_and_export_round_trip() {
    let out = epcodes(&["fixtures", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["fano", "q3-n20", "q4-n7", "q6-n6"] {
        assert!(text.contains(name), "missing {name}");
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fano.code");
    let out = epcodes(&["fixtures", "export", "fano", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = epcodes(&[
        "verify",
        "--code",
        path.to_str().unwrap(),
        "--hypergraph",
        "fano-complement",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn hypergraph_report_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fano.hg");
    let out = epcodes(&[
        "hypergraph",
        "fano-complement",
        "--color",
        "exact",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("edges 28"));
    assert!(text.contains("colors 7"));
    assert!(text.contains("status exact"));

    // the written file parses back to the same instance
    let out = epcodes(&[
        "verify",
        "--code",
        "fano",
        "--hypergraph",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    // the 2-section of the line complement is the complete graph
    let out = epcodes(&["hypergraph", "fano-complement", "--two-section"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("k 2"), "{text}");
    assert!(text.contains("edges 21"), "{text}");
}

#[test]
fn construct_pg_and_avg_verify() {
    let out = epcodes(&["construct", "pg", "--field", "2", "--k", "3", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("valid true"));

    let out = epcodes(&["construct", "avg", "--p", "2", "--n", "6", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("average_success 9/10"), "{text}");
    assert!(text.contains("bound 4/5"), "{text}");
}

#[test]
fn construct_compose_on_a_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let hg = dir.path().join("c5.hg");
    std::fs::write(&hg, "5 2\n1 2\n2 3\n3 4\n4 5\n1 5\n").unwrap();
    let code_path = dir.path().join("c5.code");
    let out = epcodes(&[
        "construct",
        "compose",
        "--hypergraph",
        hg.to_str().unwrap(),
        "--out",
        code_path.to_str().unwrap(),
        "--verify",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("colors 3"), "{text}");
    assert!(text.contains("valid true"), "{text}");

    // the emitted file verifies on its own
    let out = epcodes(&[
        "verify",
        "--code",
        code_path.to_str().unwrap(),
        "--hypergraph",
        hg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn search_writes_a_verifiable_witness() {
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("witness.code");
    let out = epcodes_in(
        dir.path(),
        &[
            "search",
            "--hypergraph",
            "complete:4:2",
            "--qmax",
            "3",
            "--out",
            witness.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("verdict found"));
    assert!(text.contains("q 3"));
    assert!(text.contains("nodes "));

    let out = epcodes(&[
        "verify",
        "--code",
        witness.to_str().unwrap(),
        "--hypergraph",
        "complete:4:2",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn universal_actions() {
    let out = epcodes(&["universal", "--q", "2", "--family", "gq", "--action", "enum"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "0011");

    let out = epcodes(&["universal", "--q", "3", "--family", "gq", "--action", "cover"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 6);

    let out = epcodes(&["universal", "--q", "3", "--family", "hq", "--action", "color"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("vertices 216"));
    assert!(text.contains("colors 3"));
    assert!(text.contains("valid true"));

    let out = epcodes(&["universal", "--q", "3", "--family", "gq", "--action", "clique"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("clique_size 4"));

    let out = epcodes(&[
        "universal",
        "--q",
        "4",
        "--family",
        "gq-eps",
        "--action",
        "stats",
        "--samples",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("vertices 4294967296"), "{text}");
    assert!(text.contains("cover_sets 270270"), "{text}");
    assert!(text.contains("homes_found 100"), "{text}");
}

#[test]
fn verification_is_deterministic_across_jobs() {
    let single = epcodes(&[
        "verify",
        "--code",
        "q3-n20",
        "--hypergraph",
        "complete:20:2",
        "--eps",
        "1/3",
    ]);
    let fanned = epcodes(&[
        "--jobs",
        "4",
        "verify",
        "--code",
        "q3-n20",
        "--hypergraph",
        "complete:20:2",
        "--eps",
        "1/3",
    ]);
    assert_eq!(stdout(&single), stdout(&fanned));
    assert_eq!(single.status.code(), fanned.status.code());
}

#[test]
fn selftest_passes() {
    let out = epcodes(&["selftest"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("check 1 fano-instance pass"), "{text}");
    assert!(text.contains("check 8 property-suites pass"), "{text}");
    assert!(text.trim_end().ends_with("selftest pass"), "{text}");
}
