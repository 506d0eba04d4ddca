//! Dataset assembly: backgrounds, per-sample planning, the worker pool, and
//! the on-disk layout (`images/`, `masks/`, `manifest.csv`, `config.json`).
//!
//! Every sample is a pure function of the master seed and its index:
//! `sample_seed = derive(master_seed, SAMPLE, index)`, with scene choices,
//! lesion harvesting, and placement drawing from sub-streams of that seed.
//! Workers only partition the index space, so any `--jobs` value produces
//! byte-identical output.

use std::fs;
use std::path::{Path, PathBuf};

use lesionbench_core::lesion::SynthConfig;
use lesionbench_core::raster::center_fit;
use lesionbench_core::rng::{self, derive, Rng};
use lesionbench_core::scene::{
    compose, phantom_background, place_lesions, Background, ComposeMode, SceneConfig, TARGET_SIZE,
};
use serde::{Deserialize, Serialize};

use crate::formats::png;
use crate::manifest::{write_manifest, SampleRecord, Split};
use crate::{Error, Result};

/// Compose-mode flag mirrored for serialization and clap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[clap(rename_all = "lowercase")]
pub enum ComposeModeOpt {
    Additive,
    Multiplicative,
}

impl From<ComposeModeOpt> for ComposeMode {
    fn from(mode: ComposeModeOpt) -> Self {
        match mode {
            ComposeModeOpt::Additive => ComposeMode::Additive,
            ComposeModeOpt::Multiplicative => ComposeMode::Multiplicative,
        }
    }
}

/// Where backgrounds come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BackgroundSource {
    /// Seeded synthetic phantoms.
    Phantom { count: usize },
    /// A directory of 8- or 16-bit grayscale slices.
    Directory { path: PathBuf },
}

/// Full resolved configuration of one generation run; echoed to
/// `config.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub n_samples: usize,
    pub master_seed: u64,
    pub source: BackgroundSource,
    /// Peak lesion intensity.
    pub w: f64,
    pub lesions_min: usize,
    pub lesions_max: usize,
    pub brain_threshold: f64,
    pub train_frac: f64,
    pub val_frac: f64,
    pub test_frac: f64,
    pub compose_mode: ComposeModeOpt,
    /// Slices with at least this fraction of black pixels are rejected.
    pub black_frac_max: f64,
    /// Target mean intensity of nonzero pixels after normalization.
    pub mean_target: f64,
    pub noise_size: usize,
    pub blur_radius: f64,
    pub smooth_radius: f64,
    pub area_min: usize,
    pub area_max: usize,
    pub margin: usize,
    pub regular_min_c: f64,
    pub irregular_max_c: f64,
    pub max_noise_images: usize,
}

impl DatasetConfig {
    pub fn with_source(source: BackgroundSource) -> Self {
        let synth = SynthConfig::default();
        DatasetConfig {
            n_samples: 200,
            master_seed: 0,
            source,
            w: 0.5,
            lesions_min: 3,
            lesions_max: 5,
            brain_threshold: 0.1,
            train_frac: 0.6,
            val_frac: 0.2,
            test_frac: 0.2,
            compose_mode: ComposeModeOpt::Additive,
            black_frac_max: 0.55,
            mean_target: 0.25,
            noise_size: synth.noise_size,
            blur_radius: synth.blur1_radius,
            smooth_radius: synth.blur2_radius,
            area_min: synth.area_min,
            area_max: synth.area_max,
            margin: synth.margin,
            regular_min_c: synth.regular_min_c,
            irregular_max_c: synth.irregular_max_c,
            max_noise_images: synth.max_noise_images,
        }
    }

    pub fn synth_config(&self) -> SynthConfig {
        SynthConfig {
            noise_size: self.noise_size,
            blur1_radius: self.blur_radius,
            blur2_radius: self.smooth_radius,
            area_min: self.area_min,
            area_max: self.area_max,
            margin: self.margin,
            regular_min_c: self.regular_min_c,
            irregular_max_c: self.irregular_max_c,
            max_noise_images: self.max_noise_images,
        }
    }

    pub fn scene_config(&self) -> SceneConfig {
        SceneConfig {
            w: self.w,
            compose_mode: self.compose_mode.into(),
            brain_threshold: self.brain_threshold,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::Config("--num-images must be at least 1".into()));
        }
        let total = self.train_frac + self.val_frac + self.test_frac;
        if (total - 1.0).abs() > 1e-9 || self.train_frac < 0.0 || self.val_frac < 0.0 || self.test_frac < 0.0 {
            return Err(Error::Config(format!(
                "split fractions must be nonnegative and sum to 1, got {total}"
            )));
        }
        if !(self.w > 0.0 && self.w <= 1.0) {
            return Err(Error::Config(format!("--w must lie in (0, 1], got {}", self.w)));
        }
        if !(3..=5).contains(&self.lesions_min)
            || !(3..=5).contains(&self.lesions_max)
            || self.lesions_min > self.lesions_max
        {
            return Err(Error::Config(format!(
                "lesion count range must satisfy 3 <= min <= max <= 5, got {}..{}",
                self.lesions_min, self.lesions_max
            )));
        }
        if !(0.0..1.0).contains(&self.black_frac_max) {
            return Err(Error::Config("--black-frac-max must lie in [0, 1)".into()));
        }
        if !(self.mean_target > 0.0 && self.mean_target <= 0.7) {
            return Err(Error::Config("--mean-target must lie in (0, 0.7]".into()));
        }
        if let BackgroundSource::Phantom { count: 0 } = self.source {
            return Err(Error::Config("--phantom must be at least 1".into()));
        }
        self.synth_config().validate()?;
        Ok(())
    }
}

/// Counts reported after a successful build.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuildSummary {
    pub n_samples: usize,
    pub regular: usize,
    pub irregular: usize,
    pub train: usize,
    pub val: usize,
    pub test: usize,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

/// Loads and normalizes background slices from a directory, in file-name
/// order. Slices whose fraction of pixels at or below 1/255 reaches
/// `black_frac_max` are rejected; survivors are center-fitted to the target
/// size, scaled so the mean of their nonzero pixels hits `mean_target`, and
/// clamped to the background intensity ceiling.
pub fn ingest_backgrounds(dir: &Path, cfg: &DatasetConfig) -> Result<(Vec<Background>, Vec<String>)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();

    let mut backgrounds = Vec::new();
    let mut warnings = Vec::new();
    for path in paths {
        let img = match png::read_gray(&path) {
            Ok(img) => img,
            Err(e) => {
                warnings.push(format!("skipping {}: {e}", path.display()));
                continue;
            }
        };
        let black = img.as_slice().iter().filter(|&&v| v <= 1.0 / 255.0).count();
        if black as f64 / img.len() as f64 >= cfg.black_frac_max {
            continue;
        }
        let mut fitted = center_fit(&img, TARGET_SIZE)?;
        let (nonzero_sum, nonzero_count) = fitted
            .as_slice()
            .iter()
            .filter(|&&v| v > 0.0)
            .fold((0.0, 0usize), |(s, n), &v| (s + v, n + 1));
        if nonzero_count == 0 {
            warnings.push(format!("skipping {}: slice is entirely black", path.display()));
            continue;
        }
        let scale = cfg.mean_target / (nonzero_sum / nonzero_count as f64);
        for v in fitted.as_mut_slice() {
            *v = (*v * scale).clamp(0.0, lesionbench_core::scene::BACKGROUND_MAX);
        }
        let background_id = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        backgrounds.push(Background {
            image: fitted,
            background_id,
        });
    }

    if backgrounds.is_empty() {
        return Err(Error::EmptyInput { path: dir.into() });
    }
    Ok((backgrounds, warnings))
}

/// Seed of the `index`-th phantom background for a master seed.
pub fn phantom_seed(master_seed: u64, index: usize) -> u64 {
    derive(master_seed, rng::domain::BACKGROUND, index as u64)
}

fn load_backgrounds(cfg: &DatasetConfig) -> Result<(Vec<Background>, Vec<String>)> {
    match &cfg.source {
        BackgroundSource::Phantom { count } => {
            let backgrounds = (0..*count)
                .map(|i| phantom_background(phantom_seed(cfg.master_seed, i)))
                .collect();
            Ok((backgrounds, Vec::new()))
        }
        BackgroundSource::Directory { path } => ingest_backgrounds(path, cfg),
    }
}

/// Assigns a split to each background: a seeded shuffle, then the first
/// `floor(n * train_frac)` go to train, the next `floor(n * val_frac)` to
/// val, and the remainder to test. Samples inherit their background's split,
/// so no background ever crosses splits.
fn assign_splits(n: usize, cfg: &DatasetConfig) -> Vec<Split> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = Rng::new(derive(cfg.master_seed, rng::domain::SPLIT, 0));
    rng.shuffle(&mut order);

    let n_train = (n as f64 * cfg.train_frac).floor() as usize;
    let n_val = (n as f64 * cfg.val_frac).floor() as usize;
    let mut splits = vec![Split::Test; n];
    for (rank, &bg) in order.iter().enumerate() {
        splits[bg] = if rank < n_train {
            Split::Train
        } else if rank < n_train + n_val {
            Split::Val
        } else {
            Split::Test
        };
    }
    splits
}

fn generate_sample(
    index: usize,
    cfg: &DatasetConfig,
    backgrounds: &[Background],
    splits: &[Split],
    out: &Path,
) -> Result<SampleRecord> {
    let id = format!("{index:05}");
    let label = (index % 2) as u8;
    let sample_seed = derive(cfg.master_seed, rng::domain::SAMPLE, index as u64);

    let mut scene_rng = Rng::new(derive(sample_seed, rng::domain::SCENE, 0));
    let span = (cfg.lesions_max - cfg.lesions_min + 1) as u64;
    let n_lesions = cfg.lesions_min + scene_rng.below(span) as usize;
    let bg_index = scene_rng.below(backgrounds.len() as u64) as usize;
    let background = &backgrounds[bg_index];

    let (want_regular, want_irregular) = if label == 0 { (n_lesions, 0) } else { (0, n_lesions) };
    let stamps = lesionbench_core::lesion::harvest_lesions(
        derive(sample_seed, rng::domain::HARVEST, 0),
        want_regular,
        want_irregular,
        &cfg.synth_config(),
    )?;

    let mut place_rng = Rng::new(derive(sample_seed, rng::domain::PLACEMENT, 0));
    let spec = place_lesions(background, &stamps, &cfg.scene_config(), &mut place_rng)?;
    let (image, mask) = compose(background, &stamps, &spec);

    let image_path = format!("images/{id}.png");
    let mask_path = format!("masks/{id}.png");
    png::write_gray16(&out.join(&image_path), &image)?;
    png::write_mask(&out.join(&mask_path), &mask)?;

    Ok(SampleRecord {
        id,
        label,
        split: splits[bg_index],
        n_lesions,
        gt_pixels: mask.count_ones(),
        background_id: background.background_id.clone(),
        seed: sample_seed,
        image_path,
        mask_path,
    })
}

/// Builds a complete dataset under `out`. Deterministic in the configuration;
/// `jobs` only partitions the work. On failure a `FAILED` marker naming the
/// error is left in the output directory.
pub fn build_dataset(cfg: &DatasetConfig, out: &Path, jobs: usize) -> Result<BuildSummary> {
    cfg.validate()?;
    let jobs = jobs.max(1);

    fs::create_dir_all(out.join("images")).map_err(|e| Error::io(out, e))?;
    fs::create_dir_all(out.join("masks")).map_err(|e| Error::io(out, e))?;

    match build_inner(cfg, out, jobs) {
        Ok(summary) => Ok(summary),
        Err(e) => {
            let _ = fs::write(out.join("FAILED"), format!("{e}\n"));
            Err(e)
        }
    }
}

fn build_inner(cfg: &DatasetConfig, out: &Path, jobs: usize) -> Result<BuildSummary> {
    let (backgrounds, warnings) = load_backgrounds(cfg)?;
    let splits = assign_splits(backgrounds.len(), cfg);

    let n = cfg.n_samples;
    let mut slots: Vec<Option<Result<SampleRecord>>> = (0..n).map(|_| None).collect();

    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(jobs);
        for worker in 0..jobs {
            let backgrounds = &backgrounds;
            let splits = &splits;
            handles.push(scope.spawn(move || {
                let mut produced = Vec::new();
                let mut index = worker;
                while index < n {
                    produced.push((index, generate_sample(index, cfg, backgrounds, splits, out)));
                    index += jobs;
                }
                produced
            }));
        }
        for handle in handles {
            for (index, result) in handle.join().expect("worker panicked") {
                slots[index] = Some(result);
            }
        }
    });

    let mut records = Vec::with_capacity(n);
    for slot in slots {
        records.push(slot.expect("every index was produced")?);
    }

    write_manifest(&out.join("manifest.csv"), &records)?;
    let config_path = out.join("config.json");
    let json = serde_json::to_string_pretty(cfg).map_err(|e| Error::Json {
        path: config_path.clone(),
        source: e,
    })?;
    fs::write(&config_path, json + "\n").map_err(|e| Error::io(&config_path, e))?;

    let mut summary = BuildSummary {
        n_samples: n,
        regular: 0,
        irregular: 0,
        train: 0,
        val: 0,
        test: 0,
        warnings,
    };
    for record in &records {
        match record.label {
            0 => summary.regular += 1,
            _ => summary.irregular += 1,
        }
        match record.split {
            Split::Train => summary.train += 1,
            Split::Val => summary.val += 1,
            Split::Test => summary.test += 1,
        }
    }
    Ok(summary)
}
