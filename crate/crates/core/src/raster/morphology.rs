use alloc::vec;
use alloc::vec::Vec;

use super::BinaryImage;
use crate::{Error, Result};

/// An odd-sized boolean mask with a set center, anchored at that center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuringElement {
    width: usize,
    height: usize,
    mask: Vec<bool>,
}

impl StructuringElement {
    /// Validates that both sides are odd and the center cell is set.
    pub fn new(width: usize, height: usize, mask: Vec<bool>) -> Result<Self> {
        if width.is_multiple_of(2) || height.is_multiple_of(2) || width == 0 || height == 0 {
            return Err(Error::EvenStructuringElement { width, height });
        }
        if mask.len() != width * height {
            return Err(Error::DataLengthMismatch {
                len: mask.len(),
                width,
                height,
            });
        }
        if !mask[(height / 2) * width + width / 2] {
            return Err(Error::EmptyStructuringElement);
        }
        Ok(StructuringElement { width, height, mask })
    }

    /// The default element: a solid 3x3 square.
    pub fn square3() -> Self {
        StructuringElement {
            width: 3,
            height: 3,
            mask: vec![true; 9],
        }
    }

    /// Offsets of set cells relative to the center, as (row, col) deltas.
    pub fn offsets(&self) -> Vec<(isize, isize)> {
        let (ch, cw) = (self.height as isize / 2, self.width as isize / 2);
        let mut out = Vec::new();
        for r in 0..self.height {
            for c in 0..self.width {
                if self.mask[r * self.width + c] {
                    out.push((r as isize - ch, c as isize - cw));
                }
            }
        }
        out
    }
}

/// Binary morphological operator selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphOp {
    Erode,
    Dilate,
    /// Erosion followed by dilation with the same element.
    Open,
}

/// Set-theoretic binary morphology; out-of-bounds neighbors read as `false`.
pub fn morphology(bin: &BinaryImage, op: MorphOp, se: &StructuringElement) -> BinaryImage {
    match op {
        MorphOp::Erode => erode(bin, se),
        MorphOp::Dilate => dilate(bin, se),
        MorphOp::Open => dilate(&erode(bin, se), se),
    }
}

fn erode(bin: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    let offsets = se.offsets();
    BinaryImage::from_fn(bin.width(), bin.height(), |r, c| {
        offsets
            .iter()
            .all(|&(dr, dc)| bin.get_or_false(r as isize + dr, c as isize + dc))
    })
    .expect("same dimensions as input")
}

fn dilate(bin: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    // Minkowski sum: p is set iff some element translate anchored at a set
    // pixel covers p. Paired with erode above, Open is the union of element
    // translates contained in the set.
    let offsets = se.offsets();
    BinaryImage::from_fn(bin.width(), bin.height(), |r, c| {
        offsets
            .iter()
            .any(|&(dr, dc)| bin.get_or_false(r as isize - dr, c as isize - dc))
    })
    .expect("same dimensions as input")
}
