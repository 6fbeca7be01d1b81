use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pebblelab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_prints_the_chain_plan() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("chain.json"),
        r#"{"n": 3, "pebbles": [[1, 1, 2], [1, 2, 1], [3, 2, 2]]}"#,
    )
    .unwrap();
    let o = run(
        &[
            "solve",
            "--n",
            "3",
            "--config",
            "chain.json",
            "--root",
            "2,3",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "solvable");
    assert_eq!(
        v["plan"],
        serde_json::json!([[1, 1, 1, 3], [3, 2, 1, 2], [1, 2, 1, 3], [1, 3, 2, 3]])
    );

    let o = run(
        &["solve", "--config", "chain.json", "--root", "4,4"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["solve", "--n", "4", "--config", "chain.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_reports_unsolvable_roots() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("one.json"),
        r#"{"n_vertices": 9, "counts": [1]}"#,
    )
    .unwrap();
    let o = run(&["solve", "--config", "one.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "unsolvable");
}

#[test]
fn stats_prints_exact_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["stats", "--N", "4", "--m", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "4,2,1,2/5,2/5,0.4,0.4");
    assert_eq!(lines[2], "4,2,2,3/5,1,0.6,1");
    assert_eq!(lines[4], "4,2,8/5,6/25,1.6,0.24");
}

#[test]
fn sweep_is_reproducible_and_writes_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sweep", "--n", "4,6", "--t", "auto", "--trials", "200", "--seed", "7", "--out",
    ];
    let mut first = args.to_vec();
    first.push("a.csv");
    let mut second = vec!["--jobs", "1"];
    second.extend(args);
    second.push("b.csv");
    assert_eq!(run(&first, dir.path()).status.code(), Some(0));
    assert_eq!(run(&second, dir.path()).status.code(), Some(0));
    let a = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read_to_string(dir.path().join("b.csv")).unwrap());
    assert!(a.starts_with(
        "n,N,t,trials,solvable_lower,solvable_upper,unknown_rate,ci_low,ci_high,seed\n"
    ));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["subcommand"], "sweep");
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["args"]["trials"], 200);
}

#[test]
fn usage_errors_exit_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["sweep", "--n", "4", "--bogus", "--out", "x.csv"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("x.csv").exists());
    assert_eq!(
        run(&["sweep", "--n", "four"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        run(
            &["experiment", "path", "--n", "16", "--beta", "2"],
            dir.path()
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["experiment", "nope", "--n", "16"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn runtime_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "sweep", "--n", "5", "--t", "20", "--exact", "--out", "x.csv",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(!dir.path().join("x.csv").exists());
    assert_eq!(
        run(&["solve", "--config", "missing.json"], dir.path())
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn transform_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.json"),
        r#"{"n": 3, "pebbles": [[1, 2, 3]]}"#,
    )
    .unwrap();
    let o = run(
        &["transform", "--config", "c.json", "--out", "g.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(dir.path().join("g.json"))
            .unwrap()
            .trim(),
        r#"{"n":3,"edges":[[1,2,3]]}"#
    );
    let o = run(&["transform", "--multigraph", "g.json"], dir.path());
    assert_eq!(stdout(&o).trim(), r#"{"n":3,"pebbles":[[1,2,3]]}"#);
}

#[test]
fn experiments_emit_json_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "experiment",
            "police",
            "--n",
            "16",
            "--m",
            "0",
            "--trials",
            "20",
        ],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["freq_police"], 0.0);
    let o = run(
        &[
            "experiment",
            "transfer",
            "--n",
            "8",
            "--trials",
            "20",
            "--seed",
            "3",
        ],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // m = 4n = 32, M = round(32 * 64 / 95)
    assert_eq!(v["M"], 22);
    assert!(v["frequency"]["B'"].is_number());
    let o = run(&["t-half", "--n", "4", "--trials", "200"], dir.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["max_over_min"], 1.0);
}

#[test]
fn sample_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = stdout(&run(
        &["sample", "--n", "5", "--t", "12", "--seed", "4"],
        dir.path(),
    ));
    assert_eq!(
        a,
        stdout(&run(
            &["sample", "--n", "5", "--t", "12", "--seed", "4"],
            dir.path()
        ))
    );
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let total: u64 = v["pebbles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p[2].as_u64().unwrap())
        .sum();
    assert_eq!(total, 12);
    assert_eq!(
        run(&["sample", "--n", "5"], dir.path()).status.code(),
        Some(2)
    );
}

#[test]
fn verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o)
            .lines()
            .filter(|l| l.starts_with("[PASS]"))
            .count(),
        5
    );
}
