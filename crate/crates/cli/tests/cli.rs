//! Smoke tests of the command-line binary: flags, flows, and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lesionbench"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn generate_small(out: &Path, n: usize, seed: u64, jobs: usize) -> Output {
    run(&[
        "generate",
        "--phantom",
        "2",
        "--num-images",
        &n.to_string(),
        "--seed",
        &seed.to_string(),
        "--jobs",
        &jobs.to_string(),
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn generate_writes_a_balanced_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ds");
    let output = generate_small(&out, 4, 1, 1);
    assert!(output.status.success(), "{}", stderr_of(&output));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("wrote 4 samples (2 regular / 2 irregular"), "{stdout}");

    let manifest = fs::read_to_string(out.join("manifest.csv")).unwrap();
    assert_eq!(manifest.lines().count(), 5); // header + 4 rows
}

#[test]
fn generate_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(generate_small(&a, 3, 9, 1).status.success());
    assert!(generate_small(&b, 3, 9, 2).status.success());

    for rel in ["manifest.csv", "config.json", "images/00000.png", "masks/00002.png"] {
        let (ba, bb) = (fs::read(a.join(rel)).unwrap(), fs::read(b.join(rel)).unwrap());
        assert_eq!(ba, bb, "{rel} differs");
    }
}

#[test]
fn generate_with_empty_backgrounds_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty");
    fs::create_dir_all(&empty).unwrap();
    let out = dir.path().join("ds");
    let output = run(&[
        "generate",
        "--backgrounds",
        empty.to_str().unwrap(),
        "--num-images",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr_of(&output).contains("no usable background slices"));
    // Partial-output marker is left behind.
    assert!(out.join("FAILED").is_file());
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ds");

    // Unknown flag: clap usage error.
    let output = run(&["generate", "--nope"]);
    assert_eq!(output.status.code(), Some(2));

    // Neither --phantom nor --backgrounds.
    let output = run(&["generate", "--num-images", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("--phantom or --backgrounds"));

    // Fractions that do not sum to one.
    let output = run(&[
        "generate",
        "--phantom",
        "2",
        "--num-images",
        "2",
        "--train-frac",
        "0.9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("sum to 1"));
}

#[test]
fn baseline_evaluate_report_flow() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    assert!(generate_small(&ds, 4, 17, 2).status.success());

    for (method, out_name) in [("sobel", "maps-sobel"), ("laplace", "maps-laplace"), ("random", "maps-random")] {
        let maps = dir.path().join(out_name);
        let viz = dir.path().join(format!("{out_name}-viz"));
        let output = run(&[
            "baseline",
            "--dataset",
            ds.to_str().unwrap(),
            "--method",
            method,
            "--out",
            maps.to_str().unwrap(),
            "--viz-dir",
            viz.to_str().unwrap(),
        ]);
        assert!(output.status.success(), "{}", stderr_of(&output));
        assert!(maps.join("00000.lhm").is_file());
        assert!(viz.join("00000.png").is_file());
    }

    // Deterministic baselines: rerun matches.
    let again = dir.path().join("maps-sobel-2");
    let output = run(&[
        "baseline",
        "--dataset",
        ds.to_str().unwrap(),
        "--method",
        "sobel",
        "--out",
        again.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert_eq!(
        fs::read(dir.path().join("maps-sobel/00001.lhm")).unwrap(),
        fs::read(again.join("00001.lhm")).unwrap()
    );

    let results = dir.path().join("results-sobel");
    let output = run(&[
        "evaluate",
        "--dataset",
        ds.to_str().unwrap(),
        "--heatmaps",
        dir.path().join("maps-sobel").to_str().unwrap(),
        "--out",
        results.to_str().unwrap(),
        "--run-id",
        "sobel",
    ]);
    assert!(output.status.success(), "{}", stderr_of(&output));
    assert!(results.join("records.csv").is_file());
    assert!(results.join("summary.json").is_file());

    let report_path = dir.path().join("report.json");
    let output = run(&[
        "report",
        "--results",
        results.to_str().unwrap(),
        "--out",
        report_path.to_str().unwrap(),
        "--svg",
    ]);
    assert!(output.status.success(), "{}", stderr_of(&output));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["runs"][0]["id"], "sobel");
    assert_eq!(report["runs"][0]["n_records"], 4);
    let svg = fs::read_to_string(dir.path().join("report.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn report_names_file_and_line_for_malformed_csv() {
    let dir = tempfile::tempdir().unwrap();
    let run_dir = dir.path().join("broken");
    fs::create_dir_all(&run_dir).unwrap();
    fs::write(
        run_dir.join("records.csv"),
        "id,n_gt,true_positives,precision\n00000,ten,3,0.3\n",
    )
    .unwrap();
    let output = run(&["report", "--results", run_dir.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let err = stderr_of(&output);
    assert!(err.contains("records.csv:2"), "{err}");
}
