//! Backgrounds, lesion placement, and image/mask composition.

use alloc::string::String;
use alloc::vec::Vec;

use crate::lesion::LesionStamp;
use crate::raster::{gaussian_blur, BinaryImage, GrayImage};
use crate::rng::Rng;
use crate::{Error, Result};

/// Side length of composed images.
pub const TARGET_SIZE: usize = 270;
/// Upper intensity bound for backgrounds.
pub const BACKGROUND_MAX: f64 = 0.7;
/// Placement attempts per stamp before the scene restarts.
pub const PLACEMENT_ATTEMPTS: usize = 200;
/// Scene restarts before placement gives up.
pub const SCENE_RESTARTS: usize = 20;

/// A prepared background slice or phantom.
#[derive(Debug, Clone)]
pub struct Background {
    /// `TARGET_SIZE` square image with intensities in `[0, BACKGROUND_MAX]`.
    pub image: GrayImage,
    /// Stable identifier: source file stem or phantom index.
    pub background_id: String,
}

/// How lesions are blended into the background.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComposeMode {
    /// `clamp(B + L, 0, 1)`: bright lesions on top of the background.
    Additive,
    /// Alpha blend toward the lesion intensity: `B*(1 - L/w) + L`.
    Multiplicative,
}

/// Scene-level parameters shared by placement and composition.
#[derive(Debug, Clone, Copy)]
pub struct SceneConfig {
    /// Peak lesion intensity; controls how bright lesions appear.
    pub w: f64,
    pub compose_mode: ComposeMode,
    /// Background intensity above which a pixel counts as brain.
    pub brain_threshold: f64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        SceneConfig {
            w: 0.5,
            compose_mode: ComposeMode::Additive,
            brain_threshold: 0.1,
        }
    }
}

/// One placed stamp: index into the stamp list plus its top-left offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub stamp: usize,
    pub row: usize,
    pub col: usize,
}

/// A fully planned scene, ready to compose.
#[derive(Debug, Clone)]
pub struct SceneSpec {
    /// 0 for regular lesions, 1 for irregular.
    pub label: u8,
    pub placements: Vec<Placement>,
    pub w: f64,
    pub compose_mode: ComposeMode,
}

/// Pixels strictly brighter than the threshold.
pub fn brain_mask(bg: &Background, threshold: f64) -> BinaryImage {
    BinaryImage::from_fn(bg.image.width(), bg.image.height(), |r, c| {
        bg.image.get(r, c) > threshold
    })
    .expect("background is nonempty")
}

/// A deterministic brain-like phantom: nested ellipses with distinct tissue
/// bands, darker ventricles, low-frequency texture, and a softened rim,
/// normalized into `[0, BACKGROUND_MAX]`.
pub fn phantom_background(seed: u64) -> Background {
    let mut rng = Rng::new(seed);
    let size = TARGET_SIZE;
    let center = size as f64 / 2.0;

    // Outer ellipse semi-axes; kept large enough that the brain region always
    // covers well over 40% of the frame.
    let semi_r = 112.0 + rng.below(10) as f64;
    let semi_c = 92.0 + rng.below(6) as f64;

    // Two ventricles mirrored about the vertical midline.
    let vent_dr = 18.0 + rng.below(10) as f64;
    let vent_dc = 14.0 + rng.below(8) as f64;
    let vent_sr = 16.0 + rng.below(6) as f64;
    let vent_sc = 8.0 + rng.below(4) as f64;

    // Low-frequency texture: heavily smoothed unit noise, recentered.
    let texture_seed = rng.next_u64();
    let mut tex_rng = Rng::new(texture_seed);
    let noise = GrayImage::from_fn(size, size, |_, _| tex_rng.next_f64()).expect("nonzero size");
    let texture = gaussian_blur(&noise, 6.0).expect("valid radius");

    let mut img = GrayImage::from_fn(size, size, |r, c| {
        let dr = r as f64 - center;
        let dc = c as f64 - center;
        let rho = libm::sqrt((dr / semi_r) * (dr / semi_r) + (dc / semi_c) * (dc / semi_c));
        if rho > 1.0 {
            return 0.0;
        }
        let mut base = if rho <= 0.80 {
            0.55
        } else if rho <= 0.93 {
            0.38
        } else {
            0.24
        };
        for sign in [-1.0, 1.0] {
            let vr = (r as f64 - (center - vent_dr)) / vent_sr;
            let vc = (c as f64 - (center + sign * vent_dc)) / vent_sc;
            if vr * vr + vc * vc <= 1.0 {
                base = 0.18;
            }
        }
        let t = (texture.get(r, c) - 0.5) * 1.6;
        (base + t).clamp(0.12, 0.68)
    })
    .expect("nonzero size");

    // Soften the band boundaries, then normalize the peak to BACKGROUND_MAX.
    img = gaussian_blur(&img, 1.5).expect("valid radius");
    let scale = BACKGROUND_MAX / img.max_value();
    for v in img.as_mut_slice() {
        *v = (*v * scale).clamp(0.0, BACKGROUND_MAX);
    }

    Background {
        image: img,
        background_id: alloc::format!("phantom-{seed:016x}"),
    }
}

/// Places stamps at uniform positions, rejecting any that leave the frame,
/// touch non-brain pixels, or come within one pixel of an earlier stamp's
/// nonzero footprint. Keeping footprints separated (not merely the supports
/// disjoint) guarantees the composed mask keeps one component per lesion and
/// stays inside the brain.
pub fn place_lesions(
    bg: &Background,
    stamps: &[LesionStamp],
    cfg: &SceneConfig,
    rng: &mut Rng,
) -> Result<SceneSpec> {
    if !(3..=5).contains(&stamps.len()) {
        return Err(Error::BadLesionCount(stamps.len()));
    }
    let class = stamps[0].shape_class;
    if stamps.iter().any(|s| s.shape_class != class) {
        return Err(Error::MixedShapeClasses);
    }

    let brain = brain_mask(bg, cfg.brain_threshold);
    let (bw, bh) = (bg.image.width(), bg.image.height());
    let mut failed_index = 0;

    for _ in 0..=SCENE_RESTARTS {
        let mut occupied = BinaryImage::new(bw, bh).expect("nonzero dimensions");
        let mut placements = Vec::with_capacity(stamps.len());
        let mut all_placed = true;

        'stamps: for (i, stamp) in stamps.iter().enumerate() {
            let (sw, sh) = (stamp.image.width(), stamp.image.height());
            if sw > bw || sh > bh {
                failed_index = i;
                all_placed = false;
                break 'stamps;
            }
            for _ in 0..PLACEMENT_ATTEMPTS {
                let row = rng.below((bh - sh + 1) as u64) as usize;
                let col = rng.below((bw - sw + 1) as u64) as usize;
                if fits(stamp, row, col, &brain, &occupied) {
                    mark(stamp, row, col, &mut occupied);
                    placements.push(Placement { stamp: i, row, col });
                    continue 'stamps;
                }
            }
            failed_index = i;
            all_placed = false;
            break 'stamps;
        }

        if all_placed {
            return Ok(SceneSpec {
                label: match class {
                    crate::lesion::ShapeClass::Regular => 0,
                    crate::lesion::ShapeClass::Irregular => 1,
                },
                placements,
                w: cfg.w,
                compose_mode: cfg.compose_mode,
            });
        }
    }

    Err(Error::PlacementFailed {
        stamp_index: failed_index,
    })
}

fn fits(stamp: &LesionStamp, row: usize, col: usize, brain: &BinaryImage, occupied: &BinaryImage) -> bool {
    for r in 0..stamp.image.height() {
        for c in 0..stamp.image.width() {
            if stamp.image.get(r, c) <= 0.0 {
                continue;
            }
            let (br, bc) = (row + r, col + c);
            if !brain.get(br, bc) {
                return false;
            }
            for dr in -1..=1isize {
                for dc in -1..=1isize {
                    if occupied.get_or_false(br as isize + dr, bc as isize + dc) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn mark(stamp: &LesionStamp, row: usize, col: usize, occupied: &mut BinaryImage) {
    for r in 0..stamp.image.height() {
        for c in 0..stamp.image.width() {
            if stamp.image.get(r, c) > 0.0 {
                occupied.set(row + r, col + c, true);
            }
        }
    }
}

/// Composes the final image and its ground-truth mask.
///
/// The lesion map takes each placed stamp scaled by `w`; the mask marks every
/// pixel where a placed stamp is nonzero, independent of `w`.
pub fn compose(bg: &Background, stamps: &[LesionStamp], spec: &SceneSpec) -> (GrayImage, BinaryImage) {
    let (w, h) = (bg.image.width(), bg.image.height());
    let mut union = GrayImage::new(w, h).expect("nonzero dimensions");
    for p in &spec.placements {
        let stamp = &stamps[p.stamp];
        for r in 0..stamp.image.height() {
            for c in 0..stamp.image.width() {
                let v = stamp.image.get(r, c);
                if v > union.get(p.row + r, p.col + c) {
                    union.set(p.row + r, p.col + c, v);
                }
            }
        }
    }

    let mask = BinaryImage::from_fn(w, h, |r, c| union.get(r, c) > 0.0).expect("nonzero dimensions");
    let image = GrayImage::from_fn(w, h, |r, c| {
        let b = bg.image.get(r, c);
        let u = union.get(r, c);
        if u == 0.0 {
            return b;
        }
        match spec.compose_mode {
            ComposeMode::Additive => (b + spec.w * u).clamp(0.0, 1.0),
            ComposeMode::Multiplicative => (b * (1.0 - u) + spec.w * u).clamp(0.0, 1.0),
        }
    })
    .expect("nonzero dimensions");

    (image, mask)
}
