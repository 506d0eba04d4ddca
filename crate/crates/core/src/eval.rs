//! Heat-map scoring, baseline maps, the visualization transform, and the
//! run-level statistics (quantiles, Pearson correlation).

use alloc::vec::Vec;

use crate::raster::{edge_filter, BinaryImage, EdgeKind, GrayImage};
use crate::rng::Rng;
use crate::{Error, Result};

/// A real-valued importance map aligned to one sample; values may be signed.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatMap {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl HeatMap {
    pub fn from_vec(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        if data.len() != width * height {
            return Err(Error::DataLengthMismatch {
                len: data.len(),
                width,
                height,
            });
        }
        Ok(HeatMap { width, height, data })
    }

    pub fn from_gray(img: GrayImage) -> Self {
        HeatMap {
            width: img.width(),
            height: img.height(),
            data: img.into_vec(),
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Top-n precision of one heat map against one ground-truth mask.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalScore {
    /// Ground-truth pixel count; also the number of selected pixels.
    pub n_gt: usize,
    pub true_positives: usize,
    /// `true_positives / n_gt`.
    pub precision: f64,
}

/// Scores the `n` most intense heat-map pixels against the mask, where `n` is
/// the mask's pixel count.
///
/// The absolute value of the map is taken first, so sign conventions do not
/// matter. Ties break by value descending, then row-major index ascending,
/// which makes constant maps deterministic.
pub fn top_n_precision(hm: &HeatMap, mask: &BinaryImage) -> Result<EvalScore> {
    if hm.width() != mask.width() || hm.height() != mask.height() {
        return Err(Error::DimensionMismatch {
            aw: hm.width(),
            ah: hm.height(),
            bw: mask.width(),
            bh: mask.height(),
        });
    }
    let n_gt = mask.count_ones();
    if n_gt == 0 {
        return Err(Error::EmptyMask);
    }
    if hm.as_slice().iter().any(|v| v.is_nan()) {
        return Err(Error::NanInHeatMap);
    }

    let values: Vec<f64> = hm.as_slice().iter().map(|v| libm::fabs(*v)).collect();
    let mut order: Vec<u32> = (0..values.len() as u32).collect();
    let rank = |a: &u32, b: &u32| {
        values[*b as usize]
            .partial_cmp(&values[*a as usize])
            .expect("NaN filtered above")
            .then(a.cmp(b))
    };
    // Only membership of the top-n set matters, and the comparator is a total
    // order, so a partial selection is equivalent to a full sort.
    if n_gt < order.len() {
        order.select_nth_unstable_by(n_gt - 1, rank);
    }

    let mask_bits = mask.as_slice();
    let true_positives = order[..n_gt]
        .iter()
        .filter(|&&i| mask_bits[i as usize])
        .count();

    Ok(EvalScore {
        n_gt,
        true_positives,
        precision: true_positives as f64 / n_gt as f64,
    })
}

/// The logarithmic intensity transform used when exporting maps for display:
/// `-ln(1 - s*(1 - 1/b)) / ln(b)` for `s` in `[0,1]` and `b` in `(0,1)`.
///
/// It is a strictly increasing bijection of the unit interval that fixes both
/// endpoints and boosts small values.
pub fn viz_transform(s: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) || s.is_nan() {
        return Err(Error::OutOfDomain {
            value: s,
            domain: "[0, 1]",
        });
    }
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::OutOfDomain {
            value: b,
            domain: "(0, 1)",
        });
    }
    Ok(-libm::log(1.0 - s * (1.0 - 1.0 / b)) / libm::log(b))
}

/// Model-free heat maps anchoring the low end of explanation performance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMethod {
    Sobel,
    Laplace,
    /// I.i.d. uniform values, deterministic in the seed.
    Random,
}

/// Produces a baseline heat map for an image. Sobel and Laplace depend only on
/// the image; Random depends only on the seed.
pub fn baseline_heatmap(img: &GrayImage, method: BaselineMethod, seed: u64) -> Result<HeatMap> {
    match method {
        BaselineMethod::Sobel => Ok(HeatMap::from_gray(edge_filter(img, EdgeKind::Sobel)?)),
        BaselineMethod::Laplace => Ok(HeatMap::from_gray(edge_filter(img, EdgeKind::Laplace)?)),
        BaselineMethod::Random => {
            let mut rng = Rng::new(seed);
            let data = (0..img.len()).map(|_| rng.next_f64()).collect();
            HeatMap::from_vec(img.width(), img.height(), data)
        }
    }
}

/// Sample Pearson correlation coefficient.
///
/// Degenerate inputs (short series or zero variance) are errors rather than a
/// silent zero.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::BadSeries);
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;

    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok(cov / libm::sqrt(var_x * var_y))
}

/// Five-number summary plus the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxplotStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

/// Quantiles by linear interpolation at position `p * (N - 1)` in the sorted
/// values.
pub fn boxplot_stats(values: &[f64]) -> Result<BoxplotStats> {
    if values.is_empty() {
        return Err(Error::EmptyValues);
    }
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("boxplot input must not contain NaN"));

    let q = |p: f64| -> f64 {
        let pos = p * (sorted.len() - 1) as f64;
        let i = libm::floor(pos) as usize;
        let frac = pos - i as f64;
        if i + 1 < sorted.len() {
            sorted[i] + frac * (sorted[i + 1] - sorted[i])
        } else {
            sorted[i]
        }
    };

    Ok(BoxplotStats {
        min: sorted[0],
        q1: q(0.25),
        median: q(0.5),
        q3: q(0.75),
        max: sorted[sorted.len() - 1],
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask_from(bits: &[(usize, usize)], w: usize, h: usize) -> BinaryImage {
        let mut m = BinaryImage::new(w, h).unwrap();
        for &(r, c) in bits {
            m.set(r, c, true);
        }
        m
    }

    #[test]
    fn perfect_map_scores_one() {
        let mask = mask_from(&[(1, 1), (2, 3), (4, 0)], 5, 5);
        let hm = HeatMap::from_gray(mask.to_gray());
        let score = top_n_precision(&hm, &mask).unwrap();
        assert_eq!(score.n_gt, 3);
        assert_eq!(score.true_positives, 3);
        assert_eq!(score.precision, 1.0);
    }

    #[test]
    fn inverted_map_scores_zero() {
        let mask = mask_from(&[(0, 0), (0, 1)], 4, 4);
        let inverted: Vec<f64> = mask.as_slice().iter().map(|&b| if b { 0.0 } else { 1.0 }).collect();
        let hm = HeatMap::from_vec(4, 4, inverted).unwrap();
        let score = top_n_precision(&hm, &mask).unwrap();
        assert_eq!(score.precision, 0.0);
    }

    #[test]
    fn constant_map_selects_row_major_prefix() {
        let mask = mask_from(&[(0, 0), (0, 2), (3, 3)], 4, 4);
        let hm = HeatMap::from_vec(4, 4, alloc::vec![0.5; 16]).unwrap();
        let score = top_n_precision(&hm, &mask).unwrap();
        // Ties select indices 0, 1, 2: hits (0,0) and (0,2).
        assert_eq!(score.true_positives, 2);
    }

    #[test]
    fn sign_and_scale_are_ignored() {
        let mask = mask_from(&[(1, 1), (2, 2), (3, 0)], 5, 5);
        let base: Vec<f64> = (0..25).map(|i| ((i * 37) % 23) as f64 / 23.0).collect();
        let hm = HeatMap::from_vec(5, 5, base.clone()).unwrap();
        let neg = HeatMap::from_vec(5, 5, base.iter().map(|v| -v).collect()).unwrap();
        let scaled = HeatMap::from_vec(5, 5, base.iter().map(|v| 3.5 * v).collect()).unwrap();
        let s0 = top_n_precision(&hm, &mask).unwrap();
        assert_eq!(s0, top_n_precision(&neg, &mask).unwrap());
        assert_eq!(s0, top_n_precision(&scaled, &mask).unwrap());
    }

    #[test]
    fn empty_mask_and_size_mismatch_error() {
        let hm = HeatMap::from_vec(4, 4, alloc::vec![0.0; 16]).unwrap();
        let empty = BinaryImage::new(4, 4).unwrap();
        assert!(matches!(top_n_precision(&hm, &empty), Err(Error::EmptyMask)));
        let small = mask_from(&[(0, 0)], 3, 3);
        assert!(matches!(
            top_n_precision(&hm, &small),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn viz_transform_fixes_endpoints() {
        assert_eq!(viz_transform(0.0, 0.5).unwrap(), 0.0);
        assert!((viz_transform(1.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        let mid = viz_transform(0.5, 0.5).unwrap();
        assert!((mid - libm::log(1.5) / libm::log(2.0)).abs() < 1e-15);
    }

    #[test]
    fn viz_transform_rejects_out_of_domain() {
        assert!(viz_transform(-0.1, 0.5).is_err());
        assert!(viz_transform(1.1, 0.5).is_err());
        assert!(viz_transform(0.5, 0.0).is_err());
        assert!(viz_transform(0.5, 1.0).is_err());
    }

    #[test]
    fn pearson_linear_series() {
        let xs: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        assert!((pearson(&xs, &ys).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson(&xs, &neg).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_degenerate_inputs_error() {
        assert!(matches!(pearson(&[1.0], &[2.0]), Err(Error::BadSeries)));
        assert!(matches!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::ZeroVariance)
        ));
    }

    #[test]
    fn boxplot_matches_the_interpolation_rule() {
        let s = boxplot_stats(&[5.0, 3.0, 1.0, 4.0, 2.0]).unwrap();
        assert_eq!(
            (s.min, s.q1, s.median, s.q3, s.max, s.mean),
            (1.0, 2.0, 3.0, 4.0, 5.0, 3.0)
        );
        let single = boxplot_stats(&[7.5]).unwrap();
        assert_eq!(single.min, 7.5);
        assert_eq!(single.q1, 7.5);
        assert_eq!(single.median, 7.5);
        assert_eq!(single.q3, 7.5);
        assert_eq!(single.max, 7.5);
        assert_eq!(single.mean, 7.5);
        assert!(boxplot_stats(&[]).is_err());
    }

    #[test]
    fn random_baseline_is_seeded() {
        let img = GrayImage::from_fn(8, 8, |r, c| ((r + c) % 2) as f64).unwrap();
        let a = baseline_heatmap(&img, BaselineMethod::Random, 1).unwrap();
        let b = baseline_heatmap(&img, BaselineMethod::Random, 1).unwrap();
        let c = baseline_heatmap(&img, BaselineMethod::Random, 2).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn edge_baselines_depend_only_on_the_image() {
        let img = GrayImage::from_fn(8, 8, |r, c| ((r * c) % 5) as f64 / 5.0).unwrap();
        let a = baseline_heatmap(&img, BaselineMethod::Sobel, 1).unwrap();
        let b = baseline_heatmap(&img, BaselineMethod::Sobel, 999).unwrap();
        assert_eq!(a, b);
    }
}
