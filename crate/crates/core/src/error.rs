//! Error type shared by all core operations.

use crate::lesion::ShapeClass;

/// Errors produced by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("image dimensions must be nonzero, got {width}x{height}")]
    EmptyImage { width: usize, height: usize },
    #[error("data length {len} does not match {width}x{height}")]
    DataLengthMismatch {
        len: usize,
        width: usize,
        height: usize,
    },
    #[error("dimensions {aw}x{ah} and {bw}x{bh} do not match")]
    DimensionMismatch {
        aw: usize,
        ah: usize,
        bw: usize,
        bh: usize,
    },
    #[error("blur radius must be finite and positive, got {0}")]
    InvalidRadius(f64),
    #[error("structuring element sides must be odd, got {width}x{height}")]
    EvenStructuringElement { width: usize, height: usize },
    #[error("structuring element center must be set")]
    EmptyStructuringElement,
    #[error("image must be at least {min}x{min}, got {width}x{height}")]
    ImageTooSmall {
        width: usize,
        height: usize,
        min: usize,
    },
    #[error("noise image side must be at least 16, got {0}")]
    NoiseTooSmall(usize),
    #[error("invalid synthesis config: {0}")]
    InvalidConfig(&'static str),
    #[error("exhausted {attempts} noise images with {missing} {class:?} stamp(s) still missing")]
    LesionQuota {
        class: ShapeClass,
        attempts: usize,
        missing: usize,
    },
    #[error("a scene needs 3 to 5 stamps, got {0}")]
    BadLesionCount(usize),
    #[error("stamps in one scene must share a single shape class")]
    MixedShapeClasses,
    #[error("could not place stamp {stamp_index} within the retry budget")]
    PlacementFailed { stamp_index: usize },
    #[error("ground-truth mask has no nonzero pixels")]
    EmptyMask,
    #[error("heat map contains NaN values")]
    NanInHeatMap,
    #[error("value {value} lies outside {domain}")]
    OutOfDomain { value: f64, domain: &'static str },
    #[error("correlation needs two series of equal length >= 2")]
    BadSeries,
    #[error("correlation input has zero variance")]
    ZeroVariance,
    #[error("statistics require at least one value")]
    EmptyValues,
}
