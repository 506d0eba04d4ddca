//! IO, file formats, dataset assembly, and run-level tooling around
//! `lesionbench-core`.
//!
//! File conventions:
//! * images: 16-bit grayscale PNG, pixel = `round(value * 65535)`;
//! * masks: 8-bit grayscale PNG, 0 or 255;
//! * heat maps: `LHM1` binary (see [`formats::lhm`]) or 16-bit grayscale PNG;
//! * manifests, predictions, and evaluation records: CSV;
//! * configs, run summaries, and reports: JSON.

pub mod baseline;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod evaluate;
pub mod formats;
pub mod manifest;
pub mod report;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
