//! Seeded growth of lesion stamps from smoothed noise.
//!
//! A noise image is blurred, binarized with Otsu's method, and passed through
//! erosion and opening; a second erosion thins the surviving blobs further.
//! Connected components of the configured area are collected after both
//! morphology stages and classified by isoperimetric compactness: round shapes
//! above the upper threshold, elongated shapes below the lower one, anything
//! between discarded. In practice the opening stage supplies the round shapes
//! and the second erosion supplies the rarer elongated ones.

use alloc::vec::Vec;

use crate::raster::{
    component_stats, connected_components, gaussian_blur, morphology, otsu_threshold, BinaryImage,
    ComponentStats, Connectivity, GrayImage, MorphOp, StructuringElement,
};
use crate::rng::{mix, Rng};
use crate::{Error, Result};

/// Shape class assigned by compactness thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeClass {
    /// Compactness above the upper threshold; round.
    Regular,
    /// Compactness below the lower threshold; elongated.
    Irregular,
}

/// Outcome of classifying a candidate shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Keep(ShapeClass),
    /// Compactness falls between the two thresholds.
    Discard,
}

/// Parameters of the lesion growth pipeline.
#[derive(Debug, Clone)]
pub struct SynthConfig {
    /// Side length of the square noise image.
    pub noise_size: usize,
    /// Radius of the pre-binarization blur.
    pub blur1_radius: f64,
    /// Radius of the final boundary-smoothing blur.
    pub blur2_radius: f64,
    /// Inclusive candidate area range, in pixels.
    pub area_min: usize,
    pub area_max: usize,
    /// Zero margin around the support when a stamp is cut out.
    pub margin: usize,
    /// Compactness above this is Regular.
    pub regular_min_c: f64,
    /// Compactness below this is Irregular.
    pub irregular_max_c: f64,
    /// Noise images to try before giving up on a quota.
    pub max_noise_images: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            noise_size: 256,
            blur1_radius: 2.0,
            blur2_radius: 0.75,
            area_min: 49,
            area_max: 49,
            margin: 2,
            regular_min_c: 0.8,
            irregular_max_c: 0.4,
            max_noise_images: 10_000,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.noise_size < 16 {
            return Err(Error::NoiseTooSmall(self.noise_size));
        }
        if self.area_min > self.area_max || self.area_min == 0 {
            return Err(Error::InvalidConfig("area range must satisfy 1 <= min <= max"));
        }
        if !(self.irregular_max_c > 0.0 && self.irregular_max_c < self.regular_min_c) {
            return Err(Error::InvalidConfig(
                "compactness thresholds must satisfy 0 < irregular_max_c < regular_min_c",
            ));
        }
        if self.margin == 0 {
            return Err(Error::InvalidConfig("margin must be at least 1"));
        }
        Ok(())
    }
}

/// A cut-out lesion ready for placement.
#[derive(Debug, Clone)]
pub struct LesionStamp {
    /// Soft-edged stamp after boundary smoothing, peak rescaled to 1.
    pub image: GrayImage,
    /// Pre-smoothing shape, embedded with the configured margin.
    pub support: BinaryImage,
    pub shape_class: ShapeClass,
    /// Pixel count of the support.
    pub area: usize,
    pub compactness: f64,
    /// Seed of the noise image the stamp grew from.
    pub seed: u64,
}

/// An i.i.d. unit-interval noise image, deterministic in the seed.
pub fn make_noise(seed: u64, size: usize) -> Result<GrayImage> {
    if size < 16 {
        return Err(Error::NoiseTooSmall(size));
    }
    let mut rng = Rng::new(seed);
    GrayImage::from_fn(size, size, |_, _| rng.next_f64())
}

/// Runs the filter/morphology pipeline on a noise image and returns candidate
/// supports (cropped to their bounding box) with their shape statistics.
///
/// Candidates are drawn from two points of the pipeline: after the opening
/// (round shapes survive there) and after the second erosion (which thins
/// larger blobs into the rarer elongated shapes). A shape of the target area
/// always loses pixels under further erosion, so the two collections never
/// duplicate a candidate.
pub fn extract_candidates(
    noise: &GrayImage,
    cfg: &SynthConfig,
) -> Result<Vec<(BinaryImage, ComponentStats)>> {
    cfg.validate()?;
    let se = StructuringElement::square3();

    let blurred = gaussian_blur(noise, cfg.blur1_radius)?;
    let (_, bin) = otsu_threshold(&blurred);
    let eroded = morphology(&bin, MorphOp::Erode, &se);
    let opened = morphology(&eroded, MorphOp::Open, &se);
    let thinned = morphology(&opened, MorphOp::Erode, &se);

    let mut out = Vec::new();
    for stage in [&opened, &thinned] {
        let labels = connected_components(stage, Connectivity::Eight);
        for s in component_stats(&labels) {
            if s.area < cfg.area_min || s.area > cfg.area_max {
                continue;
            }
            let (r0, c0, r1, c1) = s.bbox;
            let support = BinaryImage::from_fn(c1 - c0 + 1, r1 - r0 + 1, |r, c| {
                labels.get(r0 + r, c0 + c) == s.label
            })?;
            out.push((support, s));
        }
    }
    Ok(out)
}

/// Classifies a candidate by its compactness.
pub fn classify_shape(stats: &ComponentStats, cfg: &SynthConfig) -> Classification {
    if stats.compactness > cfg.regular_min_c {
        Classification::Keep(ShapeClass::Regular)
    } else if stats.compactness < cfg.irregular_max_c {
        Classification::Keep(ShapeClass::Irregular)
    } else {
        Classification::Discard
    }
}

/// Embeds a support with the configured zero margin, smooths its boundary, and
/// rescales the peak to 1.
pub fn finalize_stamp(
    support: &BinaryImage,
    class: ShapeClass,
    stats: &ComponentStats,
    cfg: &SynthConfig,
    seed: u64,
) -> Result<LesionStamp> {
    let m = cfg.margin;
    let padded = BinaryImage::from_fn(support.width() + 2 * m, support.height() + 2 * m, |r, c| {
        if r < m || c < m || r >= m + support.height() || c >= m + support.width() {
            false
        } else {
            support.get(r - m, c - m)
        }
    })?;

    let blurred = gaussian_blur(&padded.to_gray(), cfg.blur2_radius)?;
    let peak = blurred.max_value();
    debug_assert!(peak > 0.0);
    let mut image = blurred;
    for v in image.as_mut_slice() {
        *v /= peak;
    }

    Ok(LesionStamp {
        image,
        support: padded,
        shape_class: class,
        area: stats.area,
        compactness: stats.compactness,
        seed,
    })
}

/// Grows stamps from successive noise images (seeds derived from `seed` by
/// index) until both class quotas are met. Returns regulars first, then
/// irregulars, each in generation order.
pub fn harvest_lesions(
    seed: u64,
    want_regular: usize,
    want_irregular: usize,
    cfg: &SynthConfig,
) -> Result<Vec<LesionStamp>> {
    cfg.validate()?;
    let mut regular: Vec<LesionStamp> = Vec::with_capacity(want_regular);
    let mut irregular: Vec<LesionStamp> = Vec::with_capacity(want_irregular);

    let mut attempts = 0;
    while regular.len() < want_regular || irregular.len() < want_irregular {
        if attempts >= cfg.max_noise_images {
            let (class, missing) = if regular.len() < want_regular {
                (ShapeClass::Regular, want_regular - regular.len())
            } else {
                (ShapeClass::Irregular, want_irregular - irregular.len())
            };
            return Err(Error::LesionQuota {
                class,
                attempts,
                missing,
            });
        }
        let noise_seed = mix(seed, attempts as u64);
        attempts += 1;

        let noise = make_noise(noise_seed, cfg.noise_size)?;
        for (support, stats) in extract_candidates(&noise, cfg)? {
            let class = match classify_shape(&stats, cfg) {
                Classification::Keep(c) => c,
                Classification::Discard => continue,
            };
            let bucket = match class {
                ShapeClass::Regular => &mut regular,
                ShapeClass::Irregular => &mut irregular,
            };
            let quota = match class {
                ShapeClass::Regular => want_regular,
                ShapeClass::Irregular => want_irregular,
            };
            if bucket.len() < quota {
                bucket.push(finalize_stamp(&support, class, &stats, cfg, noise_seed)?);
            }
        }
    }

    regular.extend(irregular);
    Ok(regular)
}
