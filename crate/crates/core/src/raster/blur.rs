use alloc::vec::Vec;

use super::GrayImage;
use crate::{Error, Result};

/// Smooths an image with a normalized truncated Gaussian.
///
/// `radius` is the standard deviation in pixels; the kernel extends to
/// `ceil(3 * radius)` on each side and borders replicate the edge pixel.
/// The convolution is separable (rows, then columns).
pub fn gaussian_blur(img: &GrayImage, radius: f64) -> Result<GrayImage> {
    let kernel = gaussian_kernel(radius)?;
    let horizontal = convolve_rows(img, &kernel);
    // The column pass is the row pass on the transpose; both passes share one
    // accumulation order, which keeps blur(transpose) == transpose(blur) to
    // rounding.
    Ok(convolve_rows(&horizontal.transposed(), &kernel).transposed())
}

fn gaussian_kernel(radius: f64) -> Result<Vec<f64>> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidRadius(radius));
    }
    let half = libm::ceil(3.0 * radius) as usize;
    let sigma2 = 2.0 * radius * radius;
    let mut kernel = Vec::with_capacity(2 * half + 1);
    for i in 0..=2 * half {
        let d = i as f64 - half as f64;
        kernel.push(libm::exp(-(d * d) / sigma2));
    }
    let total: f64 = kernel.iter().sum();
    for w in &mut kernel {
        *w /= total;
    }
    Ok(kernel)
}

fn convolve_rows(img: &GrayImage, kernel: &[f64]) -> GrayImage {
    let half = (kernel.len() / 2) as isize;
    let (w, h) = (img.width(), img.height());
    let mut data = Vec::with_capacity(w * h);
    for row in 0..h {
        for col in 0..w {
            let mut acc = 0.0;
            for (k, weight) in kernel.iter().enumerate() {
                let src = col as isize + k as isize - half;
                acc += weight * img.get_clamped(row as isize, src);
            }
            data.push(acc);
        }
    }
    GrayImage::from_vec(w, h, data).expect("same dimensions as input")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_radius() {
        let img = GrayImage::new(4, 4).unwrap();
        assert!(matches!(gaussian_blur(&img, 0.0), Err(Error::InvalidRadius(_))));
        assert!(matches!(gaussian_blur(&img, -1.0), Err(Error::InvalidRadius(_))));
        assert!(matches!(gaussian_blur(&img, f64::NAN), Err(Error::InvalidRadius(_))));
    }

    #[test]
    fn constant_image_is_preserved() {
        let img = GrayImage::from_fn(9, 9, |_, _| 0.3).unwrap();
        let out = gaussian_blur(&img, 2.0).unwrap();
        for &v in out.as_slice() {
            assert!((v - 0.3).abs() < 1e-12, "got {v}");
        }
    }

    #[test]
    fn impulse_response_is_normalized_and_symmetric() {
        let mut img = GrayImage::new(17, 17).unwrap();
        img.set(8, 8, 1.0);
        let out = gaussian_blur(&img, 2.0).unwrap();

        assert!((out.sum() - 1.0).abs() < 1e-9);
        let center = out.get(8, 8);
        for &v in out.as_slice() {
            assert!(v <= center);
        }
        // 90-degree rotational symmetry about the impulse.
        for r in 0..17 {
            for c in 0..17 {
                let rotated = out.get(c, 16 - r);
                assert!((out.get(r, c) - rotated).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kernel_width_tracks_radius() {
        assert_eq!(gaussian_kernel(2.0).unwrap().len(), 13);
        assert_eq!(gaussian_kernel(0.75).unwrap().len(), 7);
    }
}
