//! Grayscale PNG read/write.
//!
//! Intensity images are stored as 16-bit grayscale with
//! `pixel = round(value * 65535)`; masks as 8-bit 0/255.

use std::path::Path;

use image::{GrayImage as Gray8, ImageBuffer, Luma};
use lesionbench_core::raster::{BinaryImage, GrayImage};

use crate::{Error, Result};

/// Decodes any grayscale-convertible image into unit-interval intensities.
pub fn read_gray(path: &Path) -> Result<GrayImage> {
    let img = image::open(path)
        .map_err(|e| Error::image(path, e))?
        .into_luma16();
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data = img.into_raw().into_iter().map(|v| v as f64 / 65535.0).collect();
    GrayImage::from_vec(w, h, data).map_err(Error::from)
}

/// Writes a unit-interval image as 16-bit grayscale PNG.
pub fn write_gray16(path: &Path, img: &GrayImage) -> Result<()> {
    let buf: ImageBuffer<Luma<u16>, Vec<u16>> = ImageBuffer::from_fn(
        img.width() as u32,
        img.height() as u32,
        |x, y| Luma([(img.get(y as usize, x as usize).clamp(0.0, 1.0) * 65535.0).round() as u16]),
    );
    buf.save(path).map_err(|e| Error::image(path, e))
}

/// Writes a mask as 8-bit grayscale PNG (0 or 255).
pub fn write_mask(path: &Path, mask: &BinaryImage) -> Result<()> {
    let buf = Gray8::from_fn(mask.width() as u32, mask.height() as u32, |x, y| {
        Luma([if mask.get(y as usize, x as usize) { 255u8 } else { 0 }])
    });
    buf.save(path).map_err(|e| Error::image(path, e))
}

/// Reads a mask: any nonzero pixel is `true`.
pub fn read_mask(path: &Path) -> Result<BinaryImage> {
    let img = image::open(path)
        .map_err(|e| Error::image(path, e))?
        .into_luma16();
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data = img.into_raw().into_iter().map(|v| v != 0).collect();
    BinaryImage::from_vec(w, h, data).map_err(Error::from)
}
