//! Command-line surface.
//!
//! Exit codes: 0 on success, 1 on runtime failure, 2 on usage errors.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::baseline::{generate_baselines, BaselineMethodOpt, BaselineOptions};
use crate::dataset::{build_dataset, BackgroundSource, ComposeModeOpt, DatasetConfig};
use crate::evaluate::{evaluate_run, read_predictions, write_outputs};
use crate::manifest::Split;
use crate::report::{build_report, render_boxplot_svg};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "lesionbench", version, about = "Synthetic lesion benchmark: generation, baselines, scoring, reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a dataset of lesioned images with ground-truth masks.
    Generate(GenerateArgs),
    /// Produce baseline heat maps (edge filters or seeded random) for a dataset.
    Baseline(BaselineArgs),
    /// Score a directory of heat maps against a dataset.
    Evaluate(EvaluateArgs),
    /// Merge evaluation outputs into a JSON report (optionally with an SVG boxplot).
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Output dataset directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Number of samples to generate.
    #[arg(long, default_value_t = 200)]
    pub num_images: usize,
    /// Master seed; the whole dataset is a pure function of it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use this many seeded phantom backgrounds.
    #[arg(long, conflicts_with = "backgrounds")]
    pub phantom: Option<usize>,
    /// Use grayscale slices from this directory as backgrounds.
    #[arg(long)]
    pub backgrounds: Option<PathBuf>,
    /// Peak lesion intensity (controls how bright lesions are).
    #[arg(long, default_value_t = 0.5)]
    pub w: f64,
    #[arg(long, default_value_t = 3)]
    pub lesions_min: usize,
    #[arg(long, default_value_t = 5)]
    pub lesions_max: usize,
    /// Background intensity above which a pixel counts as brain.
    #[arg(long, default_value_t = 0.1)]
    pub brain_threshold: f64,
    #[arg(long, default_value_t = 0.6)]
    pub train_frac: f64,
    #[arg(long, default_value_t = 0.2)]
    pub val_frac: f64,
    #[arg(long, default_value_t = 0.2)]
    pub test_frac: f64,
    #[arg(long, value_enum, default_value_t = ComposeModeOpt::Additive)]
    pub compose_mode: ComposeModeOpt,
    /// Reject slices whose black-pixel fraction reaches this value.
    #[arg(long, default_value_t = 0.55)]
    pub black_frac_max: f64,
    /// Normalize each slice's nonzero-pixel mean to this value.
    #[arg(long, default_value_t = 0.25)]
    pub mean_target: f64,
    /// Side length of the noise images lesions grow from.
    #[arg(long, default_value_t = 256)]
    pub noise_size: usize,
    /// Blur radius applied to the noise image before binarization.
    #[arg(long, default_value_t = 2.0)]
    pub blur_radius: f64,
    /// Blur radius that softens lesion boundaries.
    #[arg(long, default_value_t = 0.75)]
    pub smooth_radius: f64,
    #[arg(long, default_value_t = 49)]
    pub area_min: usize,
    #[arg(long, default_value_t = 49)]
    pub area_max: usize,
    /// Zero margin around each lesion stamp.
    #[arg(long, default_value_t = 2)]
    pub margin: usize,
    /// Compactness above this is a regular (round) lesion.
    #[arg(long, default_value_t = 0.8)]
    pub regular_min_c: f64,
    /// Compactness below this is an irregular (elongated) lesion.
    #[arg(long, default_value_t = 0.4)]
    pub irregular_max_c: f64,
    /// Noise images to try before a lesion quota fails.
    #[arg(long, default_value_t = 10_000)]
    pub max_noise_images: usize,
    /// Worker threads; any value produces byte-identical output.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    /// Dataset directory (holding manifest.csv).
    #[arg(long)]
    pub dataset: PathBuf,
    /// Output directory for the `<id>.lhm` maps.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub method: BaselineMethodOpt,
    /// Seed for the random method.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restrict to one split.
    #[arg(long, value_enum)]
    pub split: Option<Split>,
    /// Also write display PNGs of the transformed maps here.
    #[arg(long)]
    pub viz_dir: Option<PathBuf>,
    /// Base of the logarithmic display transform.
    #[arg(long, default_value_t = 0.5)]
    pub viz_b: f64,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Dataset directory (holding manifest.csv).
    #[arg(long)]
    pub dataset: PathBuf,
    /// Directory of `<id>.lhm` or `<id>.png` heat maps.
    #[arg(long)]
    pub heatmaps: PathBuf,
    /// Prediction CSVs (`id,predicted_label`); repeat for multiple runs.
    /// Evaluation keeps only samples every set predicts correctly.
    #[arg(long)]
    pub predictions: Vec<PathBuf>,
    /// Output directory for records.csv and summary.json.
    #[arg(long)]
    pub out: PathBuf,
    /// Run identifier recorded in the summary; defaults to the heat-map
    /// directory name.
    #[arg(long)]
    pub run_id: Option<String>,
    /// Restrict to one split.
    #[arg(long, value_enum)]
    pub split: Option<Split>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Evaluation output directories.
    #[arg(long, required = true, num_args = 1..)]
    pub results: Vec<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also render an SVG boxplot (next to --out, or ./report.svg).
    #[arg(long)]
    pub svg: bool,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => run_generate(args),
        Command::Baseline(args) => run_baseline(args),
        Command::Evaluate(args) => run_evaluate(args),
        Command::Report(args) => run_report(args),
    }
}

fn run_generate(args: GenerateArgs) -> Result<()> {
    let source = match (args.phantom, &args.backgrounds) {
        (Some(count), None) => BackgroundSource::Phantom { count },
        (None, Some(dir)) => BackgroundSource::Directory { path: dir.clone() },
        _ => {
            return Err(Error::Config(
                "exactly one of --phantom or --backgrounds is required".into(),
            ))
        }
    };

    let cfg = DatasetConfig {
        n_samples: args.num_images,
        master_seed: args.seed,
        source,
        w: args.w,
        lesions_min: args.lesions_min,
        lesions_max: args.lesions_max,
        brain_threshold: args.brain_threshold,
        train_frac: args.train_frac,
        val_frac: args.val_frac,
        test_frac: args.test_frac,
        compose_mode: args.compose_mode,
        black_frac_max: args.black_frac_max,
        mean_target: args.mean_target,
        noise_size: args.noise_size,
        blur_radius: args.blur_radius,
        smooth_radius: args.smooth_radius,
        area_min: args.area_min,
        area_max: args.area_max,
        margin: args.margin,
        regular_min_c: args.regular_min_c,
        irregular_max_c: args.irregular_max_c,
        max_noise_images: args.max_noise_images,
    };
    cfg.validate()?;

    let summary = build_dataset(&cfg, &args.out, args.jobs)?;
    for warning in &summary.warnings {
        eprintln!("warning: {warning}");
    }
    println!(
        "wrote {} samples ({} regular / {} irregular; train/val/test = {}/{}/{}) to {}",
        summary.n_samples,
        summary.regular,
        summary.irregular,
        summary.train,
        summary.val,
        summary.test,
        args.out.display()
    );
    Ok(())
}

fn run_baseline(args: BaselineArgs) -> Result<()> {
    let opts = BaselineOptions {
        method: args.method.into(),
        seed: args.seed,
        split: args.split,
        viz_dir: args.viz_dir,
        viz_b: args.viz_b,
    };
    let written = generate_baselines(&args.dataset, &args.out, &opts)?;
    println!("wrote {written} heat maps to {}", args.out.display());
    Ok(())
}

fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let prediction_sets = args
        .predictions
        .iter()
        .map(|p| read_predictions(p))
        .collect::<Result<Vec<_>>>()?;
    let run_id = args.run_id.clone().unwrap_or_else(|| {
        args.heatmaps
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into())
    });

    let outcome = evaluate_run(
        &args.dataset,
        &args.heatmaps,
        &prediction_sets,
        &run_id,
        args.split,
    )?;
    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }
    write_outputs(&args.out, &outcome)?;
    println!(
        "evaluated {} samples (mean precision {:.4}, {} heat maps missing) -> {}",
        outcome.summary.n_evaluated,
        outcome.summary.precision.mean,
        outcome.summary.missing_heatmaps,
        args.out.display()
    );
    Ok(())
}

fn run_report(args: ReportArgs) -> Result<()> {
    let report = build_report(&args.results)?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Json {
        path: args.out.clone().unwrap_or_else(|| PathBuf::from("report.json")),
        source: e,
    })?;

    match &args.out {
        Some(path) => {
            std::fs::write(path, json.clone() + "\n").map_err(|e| Error::io(path, e))?;
            println!("wrote report to {}", path.display());
        }
        None => println!("{json}"),
    }

    if args.svg {
        let svg_path = match &args.out {
            Some(path) => path.with_extension("svg"),
            None => PathBuf::from("report.svg"),
        };
        std::fs::write(&svg_path, render_boxplot_svg(&report)).map_err(|e| Error::io(&svg_path, e))?;
        println!("wrote boxplot to {}", svg_path.display());
    }
    Ok(())
}
