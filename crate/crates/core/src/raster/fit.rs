use super::GrayImage;
use crate::{Error, Result};

/// Center-pads (with zeros) or center-crops each dimension independently to
/// `target`; odd remainders leave the extra row/column at the bottom/right.
pub fn center_fit(img: &GrayImage, target: usize) -> Result<GrayImage> {
    if target == 0 {
        return Err(Error::EmptyImage {
            width: target,
            height: target,
        });
    }
    let (src_row, dst_row, rows) = fit_axis(img.height(), target);
    let (src_col, dst_col, cols) = fit_axis(img.width(), target);

    let mut out = GrayImage::new(target, target)?;
    for r in 0..rows {
        for c in 0..cols {
            out.set(dst_row + r, dst_col + c, img.get(src_row + r, src_col + c));
        }
    }
    Ok(out)
}

/// Returns (source offset, destination offset, copy length) for one axis.
fn fit_axis(src: usize, dst: usize) -> (usize, usize, usize) {
    if src >= dst {
        ((src - dst) / 2, 0, dst)
    } else {
        (0, (dst - src) / 2, src)
    }
}
