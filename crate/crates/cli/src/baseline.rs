//! Baseline heat-map production over a dataset.

use std::fs;
use std::path::{Path, PathBuf};

use lesionbench_core::eval::{baseline_heatmap, viz_transform, BaselineMethod, HeatMap};
use lesionbench_core::raster::GrayImage;
use lesionbench_core::rng::{self, derive};

use crate::formats::{lhm, png};
use crate::manifest::{read_manifest, Split};
use crate::{Error, Result};

/// Method flag mirrored for clap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[clap(rename_all = "lowercase")]
pub enum BaselineMethodOpt {
    Sobel,
    Laplace,
    Random,
}

impl From<BaselineMethodOpt> for BaselineMethod {
    fn from(m: BaselineMethodOpt) -> Self {
        match m {
            BaselineMethodOpt::Sobel => BaselineMethod::Sobel,
            BaselineMethodOpt::Laplace => BaselineMethod::Laplace,
            BaselineMethodOpt::Random => BaselineMethod::Random,
        }
    }
}

pub struct BaselineOptions {
    pub method: BaselineMethod,
    /// Master seed for the random method; each sample uses a derived stream.
    pub seed: u64,
    pub split: Option<Split>,
    /// When set, also writes display PNGs of the transformed maps here.
    pub viz_dir: Option<PathBuf>,
    /// Transform base for the display export.
    pub viz_b: f64,
}

/// Writes one `<id>.lhm` per manifest row into `out`. Returns the number of
/// maps written.
pub fn generate_baselines(dataset_dir: &Path, out: &Path, opts: &BaselineOptions) -> Result<usize> {
    let manifest_path = dataset_dir.join("manifest.csv");
    let mut records = read_manifest(&manifest_path)?;
    if let Some(split) = opts.split {
        records.retain(|r| r.split == split);
    }
    if records.is_empty() {
        return Err(Error::EmptyManifest {
            path: manifest_path,
        });
    }

    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    if let Some(viz) = &opts.viz_dir {
        fs::create_dir_all(viz).map_err(|e| Error::io(viz, e))?;
    }

    for (index, record) in records.iter().enumerate() {
        let image = png::read_gray(&dataset_dir.join(&record.image_path))?;
        let seed = derive(opts.seed, rng::domain::BASELINE, index as u64);
        let map = baseline_heatmap(&image, opts.method, seed)?;
        lhm::write_lhm(&out.join(format!("{}.lhm", record.id)), &map)?;

        if let Some(viz) = &opts.viz_dir {
            let display = transform_for_display(&map, opts.viz_b)?;
            png::write_gray16(&viz.join(format!("{}.png", record.id)), &display)?;
        }
    }
    Ok(records.len())
}

/// Rescales `|map|` by its maximum into the unit interval, then applies the
/// logarithmic display transform.
pub fn transform_for_display(map: &HeatMap, b: f64) -> Result<GrayImage> {
    let peak = map.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::with_capacity(map.as_slice().len());
    for &v in map.as_slice() {
        let s = if peak > 0.0 { v.abs() / peak } else { 0.0 };
        out.push(viz_transform(s.clamp(0.0, 1.0), b)?);
    }
    GrayImage::from_vec(map.width(), map.height(), out).map_err(Error::from)
}
