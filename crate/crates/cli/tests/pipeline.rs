//! End-to-end library flows on small datasets.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use lesionbench::dataset::{build_dataset, ingest_backgrounds, BackgroundSource, DatasetConfig};
use lesionbench::evaluate::{evaluate_run, write_outputs, PredictionSet};
use lesionbench::formats::{lhm, png};
use lesionbench::manifest::{read_manifest, Split};
use lesionbench::report::build_report;
use lesionbench_core::eval::HeatMap;
use lesionbench_core::raster::{connected_components, Connectivity, GrayImage};
use lesionbench_core::scene::phantom_background;

fn small_config(n: usize, seed: u64) -> DatasetConfig {
    DatasetConfig {
        n_samples: n,
        master_seed: seed,
        ..DatasetConfig::with_source(BackgroundSource::Phantom { count: 3 })
    }
}

#[test]
fn small_build_has_coherent_structure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ds");
    let summary = build_dataset(&small_config(6, 11), &out, 1).unwrap();
    assert_eq!(summary.n_samples, 6);
    assert_eq!((summary.regular, summary.irregular), (3, 3));

    let records = read_manifest(&out.join("manifest.csv")).unwrap();
    assert_eq!(records.len(), 6);
    for (i, record) in records.iter().enumerate() {
        assert_eq!(record.id, format!("{i:05}"));
        assert_eq!(record.label, (i % 2) as u8);
        assert!((3..=5).contains(&record.n_lesions));

        let mask = png::read_mask(&out.join(&record.mask_path)).unwrap();
        assert_eq!(mask.count_ones(), record.gt_pixels);
        let components = connected_components(&mask, Connectivity::Eight);
        assert_eq!(components.count(), record.n_lesions);

        let image = png::read_gray(&out.join(&record.image_path)).unwrap();
        assert_eq!((image.width(), image.height()), (270, 270));
    }
    assert!(out.join("config.json").is_file());
    assert!(!out.join("FAILED").exists());
}

#[test]
fn rebuild_is_byte_identical_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    build_dataset(&small_config(5, 3), &a, 1).unwrap();
    build_dataset(&small_config(5, 3), &b, 1).unwrap();
    build_dataset(&small_config(5, 3), &c, 4).unwrap();
    assert_dirs_identical(&a, &b);
    assert_dirs_identical(&a, &c);
}

fn assert_dirs_identical(a: &Path, b: &Path) {
    let list = |root: &Path| -> Vec<String> {
        let mut files = Vec::new();
        let mut stack = vec![root.to_path_buf()];
        while let Some(dir) = stack.pop() {
            for entry in fs::read_dir(&dir).unwrap() {
                let path = entry.unwrap().path();
                if path.is_dir() {
                    stack.push(path);
                } else {
                    files.push(path.strip_prefix(root).unwrap().to_string_lossy().into_owned());
                }
            }
        }
        files.sort();
        files
    };
    let (fa, fb) = (list(a), list(b));
    assert_eq!(fa, fb, "file lists differ");
    for rel in &fa {
        let (ba, bb) = (fs::read(a.join(rel)).unwrap(), fs::read(b.join(rel)).unwrap());
        assert_eq!(ba, bb, "{rel} differs");
    }
}

#[test]
fn ingested_backgrounds_are_filtered_fitted_and_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let slices = dir.path().join("slices");
    fs::create_dir_all(&slices).unwrap();

    // Mostly-black slice: rejected by the 55% filter.
    let black = GrayImage::from_fn(311, 260, |r, _| if r < 100 { 0.5 } else { 0.0 }).unwrap();
    png::write_gray16(&slices.join("a_black.png"), &black).unwrap();
    // Bright slice at the odd source size: accepted, fitted to 270x270.
    let bright = GrayImage::from_fn(311, 260, |r, c| 0.2 + 0.3 * (((r + c) % 7) as f64 / 7.0)).unwrap();
    png::write_gray16(&slices.join("b_bright.png"), &bright).unwrap();
    // Garbage file: warned about and skipped.
    fs::write(slices.join("c_junk.png"), b"not a png").unwrap();

    let cfg = DatasetConfig::with_source(BackgroundSource::Directory { path: slices.clone() });
    let (backgrounds, warnings) = ingest_backgrounds(&slices, &cfg).unwrap();
    assert_eq!(backgrounds.len(), 1);
    assert_eq!(backgrounds[0].background_id, "b_bright.png");
    assert_eq!(warnings.len(), 1, "{warnings:?}");

    let img = &backgrounds[0].image;
    assert_eq!((img.width(), img.height()), (270, 270));
    assert!(img.max_value() <= 0.7);
    let (sum, count) = img
        .as_slice()
        .iter()
        .filter(|&&v| v > 0.0)
        .fold((0.0, 0usize), |(s, n), &v| (s + v, n + 1));
    assert!((sum / count as f64 - 0.25).abs() < 1e-6);
}

#[test]
fn empty_background_directory_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let slices = dir.path().join("empty");
    fs::create_dir_all(&slices).unwrap();
    let cfg = DatasetConfig::with_source(BackgroundSource::Directory { path: slices.clone() });
    assert!(matches!(
        ingest_backgrounds(&slices, &cfg),
        Err(lesionbench::Error::EmptyInput { .. })
    ));
}

#[test]
fn evaluate_supports_intersection_filtering_and_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ds");
    build_dataset(&small_config(6, 5), &out, 2).unwrap();
    let records = read_manifest(&out.join("manifest.csv")).unwrap();

    // Perfect heat maps: the masks themselves.
    let maps = dir.path().join("maps");
    fs::create_dir_all(&maps).unwrap();
    for record in &records {
        let mask = png::read_mask(&out.join(&record.mask_path)).unwrap();
        let hm = HeatMap::from_gray(mask.to_gray());
        lhm::write_lhm(&maps.join(format!("{}.lhm", record.id)), &hm).unwrap();
    }

    // Run A mislabels sample 0; run B mislabels sample 5.
    let mk_set = |id: &str, wrong: &str| PredictionSet {
        id: id.into(),
        predictions: records
            .iter()
            .map(|r| {
                let label = if r.id == wrong { 1 - r.label } else { r.label };
                (r.id.clone(), label)
            })
            .collect::<BTreeMap<_, _>>(),
    };
    let sets = vec![mk_set("runA", "00000"), mk_set("runB", "00005")];

    let outcome = evaluate_run(&out, &maps, &sets, "demo", None).unwrap();
    assert_eq!(outcome.summary.n_evaluated, 4);
    assert_eq!(
        outcome.summary.evaluated_ids,
        vec!["00001", "00002", "00003", "00004"]
    );
    let expected_acc = 5.0 / 6.0;
    assert!((outcome.summary.accuracy.unwrap() - expected_acc).abs() < 1e-12);
    assert!((outcome.summary.accuracies["runB"] - expected_acc).abs() < 1e-12);
    assert!(outcome.records.iter().all(|r| r.precision == 1.0));
    assert_eq!(outcome.summary.precision.median, 1.0);

    // Without predictions: everything retained, no accuracy.
    let all = evaluate_run(&out, &maps, &[], "all", None).unwrap();
    assert_eq!(all.summary.n_evaluated, 6);
    assert!(all.summary.accuracy.is_none());

    // Retained-set size never grows as prediction sets are added.
    let one = evaluate_run(&out, &maps, &sets[..1], "one", None).unwrap();
    assert!(one.summary.n_evaluated <= all.summary.n_evaluated);
    assert!(outcome.summary.n_evaluated <= one.summary.n_evaluated);

    // Missing heat maps are warned about and excluded.
    fs::remove_file(maps.join("00002.lhm")).unwrap();
    let partial = evaluate_run(&out, &maps, &[], "partial", None).unwrap();
    assert_eq!(partial.summary.n_evaluated, 5);
    assert_eq!(partial.summary.missing_heatmaps, 1);
    assert_eq!(partial.warnings.len(), 1);

    // Split filtering keeps only that split's samples.
    for split in [Split::Train, Split::Val, Split::Test] {
        let expected = records.iter().filter(|r| r.split == split).count();
        match evaluate_run(&out, &maps, &[], "split", Some(split)) {
            Ok(outcome) => assert_eq!(
                outcome.records.len() + outcome.summary.missing_heatmaps,
                expected
            ),
            Err(lesionbench::Error::EmptyManifest { .. }) => assert_eq!(expected, 0),
            Err(other) => panic!("unexpected error: {other}"),
        }
    }
}

#[test]
fn report_merges_runs_and_correlates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ds");
    build_dataset(&small_config(4, 9), &out, 1).unwrap();
    let records = read_manifest(&out.join("manifest.csv")).unwrap();

    let maps = dir.path().join("maps");
    fs::create_dir_all(&maps).unwrap();
    for record in &records {
        let mask = png::read_mask(&out.join(&record.mask_path)).unwrap();
        lhm::write_lhm(
            &maps.join(format!("{}.lhm", record.id)),
            &HeatMap::from_gray(mask.to_gray()),
        )
        .unwrap();
    }

    let all_correct: BTreeMap<String, u8> = records.iter().map(|r| (r.id.clone(), r.label)).collect();
    let set = PredictionSet {
        id: "model".into(),
        predictions: all_correct,
    };
    let outcome = evaluate_run(&out, &maps, &[set], "model", None).unwrap();
    assert_eq!(outcome.summary.accuracy, Some(1.0));

    let run_dir = dir.path().join("results").join("model");
    write_outputs(&run_dir, &outcome).unwrap();

    let report = build_report(&[run_dir.clone(), run_dir.clone()]).unwrap();
    assert_eq!(report.runs.len(), 2);
    assert_eq!(report.runs[0], report.runs[1]);
    assert_eq!(report.runs[0].precision.median, 1.0);
    // Only two runs with accuracy: no correlation attempted.
    assert!(report.pearson_accuracy_vs_mean_precision.is_none());
}

#[test]
fn phantom_seed_reconstructs_backgrounds_from_ids() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ds");
    build_dataset(&small_config(4, 21), &out, 1).unwrap();
    for record in read_manifest(&out.join("manifest.csv")).unwrap() {
        let hex = record.background_id.strip_prefix("phantom-").unwrap();
        let seed = u64::from_str_radix(hex, 16).unwrap();
        let bg = phantom_background(seed);
        assert_eq!(bg.background_id, record.background_id);
    }
}
