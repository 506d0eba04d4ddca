//! Scoring a directory of heat maps against a dataset, with optional
//! intersection filtering by classifier predictions.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::Path;

use lesionbench_core::eval::{boxplot_stats, top_n_precision, BoxplotStats};
use serde::{Deserialize, Serialize};

use crate::formats::{locate_heatmap, read_heatmap, png};
use crate::manifest::{csv_error, read_manifest, Split};
use crate::{Error, Result};

/// Predicted labels of one classifier run, keyed by sample id.
#[derive(Debug, Clone)]
pub struct PredictionSet {
    pub id: String,
    pub predictions: BTreeMap<String, u8>,
}

#[derive(Debug, Deserialize)]
struct PredictionRow {
    id: String,
    predicted_label: u8,
}

/// Reads a `id,predicted_label` CSV; the set id is the file stem.
pub fn read_predictions(path: &Path) -> Result<PredictionSet> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));
    let mut predictions = BTreeMap::new();
    for row in reader.deserialize::<PredictionRow>() {
        let row = row.map_err(|e| csv_error(path, &e))?;
        predictions.insert(row.id, row.predicted_label);
    }
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok(PredictionSet { id, predictions })
}

/// One scored sample; the rows of `records.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub id: String,
    pub n_gt: usize,
    pub true_positives: usize,
    pub precision: f64,
}

/// Five-number summary plus mean, as serialized in summaries and reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

impl From<BoxplotStats> for PrecisionStats {
    fn from(s: BoxplotStats) -> Self {
        PrecisionStats {
            min: s.min,
            q1: s.q1,
            median: s.median,
            q3: s.q3,
            max: s.max,
            mean: s.mean,
        }
    }
}

/// Aggregates of one evaluation run; serialized to `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run_id: String,
    /// Accuracy of the first prediction set over the full sample list; absent
    /// when no predictions were supplied.
    pub accuracy: Option<f64>,
    /// Accuracy of every supplied prediction set.
    pub accuracies: BTreeMap<String, f64>,
    pub n_evaluated: usize,
    pub missing_heatmaps: usize,
    pub evaluated_ids: Vec<String>,
    pub precision: PrecisionStats,
}

pub struct EvaluateOutcome {
    pub records: Vec<EvalRecord>,
    pub summary: RunSummary,
    pub warnings: Vec<String>,
}

/// Scores every manifest sample (optionally restricted to one split) against
/// the heat maps in `heatmaps_dir`.
///
/// When prediction sets are supplied, only samples predicted correctly by
/// *every* set are scored; each set's accuracy is still reported over the
/// full sample list. A sample missing from a prediction set counts as
/// predicted incorrectly.
pub fn evaluate_run(
    dataset_dir: &Path,
    heatmaps_dir: &Path,
    prediction_sets: &[PredictionSet],
    run_id: &str,
    split: Option<Split>,
) -> Result<EvaluateOutcome> {
    let manifest_path = dataset_dir.join("manifest.csv");
    let mut samples = read_manifest(&manifest_path)?;
    if let Some(split) = split {
        samples.retain(|r| r.split == split);
    }
    if samples.is_empty() {
        return Err(Error::EmptyManifest {
            path: manifest_path,
        });
    }

    let mut accuracies = BTreeMap::new();
    for set in prediction_sets {
        let correct = samples
            .iter()
            .filter(|s| set.predictions.get(&s.id) == Some(&s.label))
            .count();
        accuracies.insert(set.id.clone(), correct as f64 / samples.len() as f64);
    }

    let retained: Vec<_> = samples
        .iter()
        .filter(|s| {
            prediction_sets
                .iter()
                .all(|set| set.predictions.get(&s.id) == Some(&s.label))
        })
        .collect();
    if retained.is_empty() {
        return Err(Error::EmptyEvaluation);
    }

    let mut records = Vec::with_capacity(retained.len());
    let mut warnings = Vec::new();
    for sample in &retained {
        let Some(map_path) = locate_heatmap(heatmaps_dir, &sample.id) else {
            warnings.push(format!(
                "no heat map for sample {} in {}",
                sample.id,
                heatmaps_dir.display()
            ));
            continue;
        };
        let map = read_heatmap(&map_path)?;
        let mask = png::read_mask(&dataset_dir.join(&sample.mask_path))?;
        let score = top_n_precision(&map, &mask)?;
        records.push(EvalRecord {
            id: sample.id.clone(),
            n_gt: score.n_gt,
            true_positives: score.true_positives,
            precision: score.precision,
        });
    }
    if records.is_empty() {
        return Err(Error::EmptyEvaluation);
    }

    let precisions: Vec<f64> = records.iter().map(|r| r.precision).collect();
    let stats = boxplot_stats(&precisions)?;

    let summary = RunSummary {
        run_id: run_id.to_string(),
        accuracy: prediction_sets.first().map(|set| accuracies[&set.id]),
        accuracies,
        n_evaluated: records.len(),
        missing_heatmaps: warnings.len(),
        evaluated_ids: records.iter().map(|r| r.id.clone()).collect(),
        precision: stats.into(),
    };

    Ok(EvaluateOutcome {
        records,
        summary,
        warnings,
    })
}

/// Writes `records.csv` and `summary.json` into `out`.
pub fn write_outputs(out: &Path, outcome: &EvaluateOutcome) -> Result<()> {
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let records_path = out.join("records.csv");
    let file = File::create(&records_path).map_err(|e| Error::io(&records_path, e))?;
    let mut writer = csv::Writer::from_writer(BufWriter::new(file));
    for record in &outcome.records {
        writer.serialize(record).map_err(|e| csv_error(&records_path, &e))?;
    }
    writer.flush().map_err(|e| Error::io(&records_path, e))?;

    let summary_path = out.join("summary.json");
    let json = serde_json::to_string_pretty(&outcome.summary).map_err(|e| Error::Json {
        path: summary_path.clone(),
        source: e,
    })?;
    fs::write(&summary_path, json + "\n").map_err(|e| Error::io(&summary_path, e))
}

/// Reads back a `records.csv`.
pub fn read_records(path: &Path) -> Result<Vec<EvalRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));
    let mut records = Vec::new();
    for row in reader.deserialize::<EvalRecord>() {
        records.push(row.map_err(|e| csv_error(path, &e))?);
    }
    Ok(records)
}

/// Reads back a `summary.json`.
pub fn read_summary(path: &Path) -> Result<RunSummary> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::Json {
        path: path.into(),
        source: e,
    })
}
