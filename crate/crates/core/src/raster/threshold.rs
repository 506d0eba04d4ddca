use alloc::vec::Vec;

use super::{BinaryImage, GrayImage};

/// Binarizes an image with Otsu's method on a 256-bin histogram.
///
/// Intensities are quantized as `floor(v * 255)` clamped to `0..=255`; the
/// returned threshold maximizes the between-class variance and pixels with a
/// bin strictly above it become `true`. When every split has zero
/// between-class variance (all pixels in one bin), the threshold degenerates
/// to 255 and the output is all `false`.
pub fn otsu_threshold(img: &GrayImage) -> (u8, BinaryImage) {
    let bins: Vec<u8> = img.as_slice().iter().map(|&v| quantize(v)).collect();

    let mut hist = [0u64; 256];
    for &b in &bins {
        hist[b as usize] += 1;
    }

    let total: u64 = hist.iter().sum();
    let total_sum: u64 = hist.iter().enumerate().map(|(i, &n)| i as u64 * n).sum();

    // Running class-0 statistics stay in exact integers, so the merit value
    // for each split is reproducible regardless of evaluation order.
    let mut best: Option<(u8, f64)> = None;
    let mut n0 = 0u64;
    let mut s0 = 0u64;
    for (t, &count) in hist.iter().enumerate() {
        n0 += count;
        s0 += t as u64 * count;
        let n1 = total - n0;
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let merit = between_class_merit(n0, s0, n1, total_sum - s0);
        if best.is_none_or(|(_, m)| merit > m) {
            best = Some((t as u8, merit));
        }
    }

    match best {
        Some((t, merit)) if merit > 0.0 => {
            let bin = BinaryImage::from_vec(
                img.width(),
                img.height(),
                bins.iter().map(|&b| b > t).collect(),
            )
            .expect("same dimensions as input");
            (t, bin)
        }
        // Degenerate histogram: no split separates anything.
        _ => (
            255,
            BinaryImage::new(img.width(), img.height()).expect("nonzero dimensions"),
        ),
    }
}

#[inline]
pub(crate) fn quantize(v: f64) -> u8 {
    libm::floor(v * 255.0).clamp(0.0, 255.0) as u8
}

/// Between-class variance scaled by `total^2`: `(s0*n1 - s1*n0)^2 / (n0*n1)`.
#[inline]
pub(crate) fn between_class_merit(n0: u64, s0: u64, n1: u64, s1: u64) -> f64 {
    let diff = s0 as i128 * n1 as i128 - s1 as i128 * n0 as i128;
    let diff = diff as f64;
    diff * diff / (n0 as f64 * n1 as f64)
}
