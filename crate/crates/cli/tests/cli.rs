use std::process::{Command, Output};

use serde_json::Value;

fn majlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majlab"))
        .args(args)
        .env_remove("MAJLAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn oracle_prints_exact_fraction() {
    let out = majlab(&[
        "oracle", "--n", "3", "--colors", "112", "--p", "1/2", "--stat", "winprob",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["answer"]["exact"], "3/8");
    assert_eq!(v["answer"]["value"], 0.375);
}

#[test]
fn oracle_csv_with_monte_carlo() {
    let out = majlab(&[
        "oracle",
        "--colors",
        "112",
        "--p",
        "1/3",
        "--stat",
        "winprob",
        "--mc-trials",
        "500",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("statistic,value,exact,exact_square,mc_estimate,mc_stderr")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[2], "5/27");
    assert!(!row[4].is_empty());
}

#[test]
fn simulate_writes_trace_csv() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = majlab(&[
        "simulate",
        "--n",
        "200",
        "--p",
        "0.1",
        "--delta",
        "10",
        "--seed",
        "3",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("day,c1,c2\n0,110,90\n"));
    let days = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("day"))
        .count();
    assert_eq!(days, v["counts"].as_array().unwrap().len());
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("day")) {
        let cols: Vec<usize> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[1] + cols[2], 200);
    }
}

#[test]
fn simulate_is_reproducible() {
    let args = [
        "simulate", "--n", "150", "--p", "0.08", "--scheme", "half", "--seed", "9", "--format", "csv",
    ];
    assert_eq!(majlab(&args).stdout, majlab(&args).stdout);
}

#[test]
fn sweep_output_is_worker_independent() {
    let run = |workers: &str| {
        let dir = tempfile::tempdir().unwrap();
        let out = majlab(&[
            "--workers",
            workers,
            "sweep",
            "--n",
            "60,90",
            "--p",
            "0.2",
            "--delta",
            "0,3",
            "--trials",
            "40",
            "--seed",
            "5",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let results = std::fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
        assert!(dir.path().join("summary.csv").exists());
        (out.stdout, results)
    };
    let (a_out, a_file) = run("1");
    let (b_out, b_file) = run("4");
    assert_eq!(a_out, b_out);
    assert_eq!(a_file, b_file);
    assert_eq!(a_file.lines().count(), 4);
}

#[test]
fn sweep_reads_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"sweep": {"n_values": [80], "p_values": [0.25], "delta_values": [2], "trials": 30, "master_seed": 4}}"#,
    )
    .unwrap();
    let out = majlab(&["--config", cfg.to_str().unwrap(), "sweep", "--trials", "20"]);
    let v = stdout_json(&out);
    assert_eq!(v["trials"], 20);
    assert_eq!(v["n"], 80);
}

#[test]
fn scan_reports_bracket_and_theory_threshold() {
    let out = majlab(&[
        "scan", "--n", "100", "--p", "0.1", "--trials", "60", "--target", "0.9", "--seed", "1",
    ]);
    let v = stdout_json(&out);
    let upper = v["scan"]["upper"].as_f64().unwrap();
    assert!(upper > 0.0 && upper <= 50.0);
    assert!(v["delta_threshold"]["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn sets_from_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    // Path 0-2-1 plus an isolated color-2 vertex 3: vertex 2 sees both focal vertices.
    std::fs::write(&graph, r#"{"n": 4, "edges": [[0, 2], [1, 2]], "colors": [1, 1, 2, 2]}"#).unwrap();
    let out = majlab(&["sets", "--graph", graph.to_str().unwrap(), "--u", "0", "--v", "1"]);
    let v = stdout_json(&out);
    let report = &v["report"];
    let total = ["s1", "s2", "s_star"]
        .iter()
        .map(|k| report[k].as_array().unwrap().len())
        .sum::<usize>();
    assert_eq!(total, 2);
    assert_eq!(v["day2_identity"]["holds"], true);
}

#[test]
fn verify_suites_exit_zero() {
    for args in [
        vec!["verify", "identities", "--max-n", "4", "--p", "1/3"],
        vec!["verify", "fourier", "--max-n", "3", "--p", "1/4"],
        vec!["verify", "appendix-a", "--grid", "small"],
    ] {
        let out = majlab(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn report_lemmas_csv_has_every_record() {
    let out = majlab(&["report", "lemmas", "--trials", "500", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("lemma_id,quote_anchor,relation,"));
    assert!(text.lines().any(|l| l.starts_with("step4-prop-s-star(i),")));
}

#[test]
fn bad_arguments_exit_two() {
    for args in [
        vec!["simulate", "--n", "50", "--p", "1.5"],
        vec!["simulate", "--p", "0.5"],
        vec!["oracle", "--colors", "112", "--p", "1/2", "--stat", "bogus"],
        vec!["oracle", "--colors", "1122222", "--p", "1/2", "--stat", "winprob"],
        vec!["scan", "--n", "50", "--p", "0.2", "--target", "0.3"],
        vec!["verify", "identities", "--max-n", "9"],
        vec!["--workers", "0", "simulate", "--n", "5", "--p", "0.5"],
        vec!["no-such-command"],
    ] {
        let out = majlab(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn missing_files_exit_one() {
    let out = majlab(&["sets", "--graph", "/nonexistent/graph.json"]);
    assert_eq!(out.status.code(), Some(1));
}
