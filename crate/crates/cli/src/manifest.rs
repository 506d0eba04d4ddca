//! The dataset manifest: one CSV row per sample.
//!
//! Header: `id,label,split,n_lesions,gt_pixels,background_id,seed,image_path,mask_path`.
//! Paths are relative to the dataset root.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dataset partition a sample belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[clap(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        })
    }
}

/// One benchmark sample as recorded in `manifest.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub id: String,
    pub label: u8,
    pub split: Split,
    pub n_lesions: usize,
    pub gt_pixels: usize,
    pub background_id: String,
    pub seed: u64,
    pub image_path: String,
    pub mask_path: String,
}

pub fn write_manifest(path: &Path, records: &[SampleRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = csv::Writer::from_writer(BufWriter::new(file));
    for record in records {
        writer.serialize(record).map_err(|e| csv_error(path, &e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

pub fn read_manifest(path: &Path) -> Result<Vec<SampleRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::Reader::from_reader(BufReader::new(file));
    let mut records = Vec::new();
    for row in reader.deserialize::<SampleRecord>() {
        records.push(row.map_err(|e| csv_error(path, &e))?);
    }
    Ok(records)
}

/// Maps a csv error to ours, keeping the 1-based line number when known.
pub(crate) fn csv_error(path: &Path, e: &csv::Error) -> Error {
    let line = match e.position() {
        Some(pos) => pos.line(),
        None => 0,
    };
    Error::Csv {
        path: path.into(),
        line,
        message: e.to_string(),
    }
}
