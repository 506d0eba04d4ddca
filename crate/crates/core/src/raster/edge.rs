use alloc::vec::Vec;

use super::GrayImage;
use crate::{Error, Result};

/// Edge detection filter selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Gradient magnitude from the standard 3x3 Sobel pair.
    Sobel,
    /// Absolute response of the 4-neighbor Laplacian.
    Laplace,
}

const SOBEL_X: [[f64; 3]; 3] = [[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]];
const SOBEL_Y: [[f64; 3]; 3] = [[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]];
const LAPLACE: [[f64; 3]; 3] = [[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]];

/// Computes a nonnegative edge-response map with edge-replicated borders.
///
/// The output reuses [`GrayImage`] as the carrier but is not clamped to the
/// unit range.
pub fn edge_filter(img: &GrayImage, kind: EdgeKind) -> Result<GrayImage> {
    if img.width() < 3 || img.height() < 3 {
        return Err(Error::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            min: 3,
        });
    }

    let (w, h) = (img.width(), img.height());
    let mut data = Vec::with_capacity(w * h);
    for row in 0..h {
        for col in 0..w {
            let v = match kind {
                EdgeKind::Sobel => {
                    let gx = apply_kernel(img, row, col, &SOBEL_X);
                    let gy = apply_kernel(img, row, col, &SOBEL_Y);
                    libm::sqrt(gx * gx + gy * gy)
                }
                EdgeKind::Laplace => {
                    let g = apply_kernel(img, row, col, &LAPLACE);
                    libm::fabs(g)
                }
            };
            data.push(v);
        }
    }
    GrayImage::from_vec(w, h, data)
}

#[inline]
fn apply_kernel(img: &GrayImage, row: usize, col: usize, kernel: &[[f64; 3]; 3]) -> f64 {
    let mut acc = 0.0;
    for (kr, krow) in kernel.iter().enumerate() {
        for (kc, &weight) in krow.iter().enumerate() {
            acc += weight * img.get_clamped(row as isize + kr as isize - 1, col as isize + kc as isize - 1);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_tiny_images() {
        let img = GrayImage::new(2, 5).unwrap();
        assert!(matches!(
            edge_filter(&img, EdgeKind::Sobel),
            Err(Error::ImageTooSmall { .. })
        ));
    }

    #[test]
    fn constant_image_has_zero_response() {
        let img = GrayImage::from_fn(6, 6, |_, _| 0.7).unwrap();
        for kind in [EdgeKind::Sobel, EdgeKind::Laplace] {
            let out = edge_filter(&img, kind).unwrap();
            assert!(out.as_slice().iter().all(|&v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn step_edge_peaks_on_adjacent_columns() {
        let img = GrayImage::from_fn(10, 6, |_, c| if c < 5 { 0.0 } else { 1.0 }).unwrap();
        let out = edge_filter(&img, EdgeKind::Sobel).unwrap();
        for row in 0..6 {
            for col in 0..10 {
                let v = out.get(row, col);
                if col == 4 || col == 5 {
                    assert!((v - 4.0).abs() < 1e-12, "({row},{col}) = {v}");
                } else {
                    assert!(v.abs() < 1e-12, "({row},{col}) = {v}");
                }
            }
        }
    }
}
