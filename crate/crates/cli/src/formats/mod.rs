//! On-disk raster formats.

pub mod lhm;
pub mod png;

use std::path::Path;

use lesionbench_core::eval::HeatMap;

use crate::{Error, Result};

/// Reads a heat map, dispatching on the extension: `.lhm` for the binary
/// format, anything else is decoded as a 16-bit grayscale PNG.
pub fn read_heatmap(path: &Path) -> Result<HeatMap> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("lhm") => lhm::read_lhm(path),
        _ => {
            let img = png::read_gray(path)?;
            Ok(HeatMap::from_gray(img))
        }
    }
}

/// Finds the heat map for a sample id in a directory: `<id>.lhm` first, then
/// `<id>.png`.
pub fn locate_heatmap(dir: &Path, id: &str) -> Option<std::path::PathBuf> {
    for ext in ["lhm", "png"] {
        let candidate = dir.join(format!("{id}.{ext}"));
        if candidate.is_file() {
            return Some(candidate);
        }
    }
    None
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::io(path, source)
}
