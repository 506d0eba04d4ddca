//! The `LHM1` binary heat-map format.
//!
//! Layout: magic bytes `LHM1`, width and height as little-endian `u32`, then
//! `width * height` little-endian `f32` values, row-major.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use lesionbench_core::eval::HeatMap;

use super::io_err;
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"LHM1";

pub fn write_lhm(path: &Path, hm: &HeatMap) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    w.write_all(MAGIC).map_err(io_err(path))?;
    w.write_all(&(hm.width() as u32).to_le_bytes()).map_err(io_err(path))?;
    w.write_all(&(hm.height() as u32).to_le_bytes()).map_err(io_err(path))?;
    for &v in hm.as_slice() {
        w.write_all(&(v as f32).to_le_bytes()).map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_lhm(path: &Path) -> Result<HeatMap> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut r = BufReader::new(file);

    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(io_err(path))?;
    if &magic != MAGIC {
        return Err(Error::HeatMapFormat {
            path: path.into(),
            reason: format!("bad magic {magic:?}"),
        });
    }

    let mut word = [0u8; 4];
    r.read_exact(&mut word).map_err(io_err(path))?;
    let width = u32::from_le_bytes(word) as usize;
    r.read_exact(&mut word).map_err(io_err(path))?;
    let height = u32::from_le_bytes(word) as usize;

    let count = width.checked_mul(height).ok_or_else(|| Error::HeatMapFormat {
        path: path.into(),
        reason: "dimension overflow".into(),
    })?;
    let mut data = Vec::with_capacity(count);
    for _ in 0..count {
        r.read_exact(&mut word).map_err(io_err(path))?;
        data.push(f32::from_le_bytes(word) as f64);
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing).map_err(io_err(path))? != 0 {
        return Err(Error::HeatMapFormat {
            path: path.into(),
            reason: "trailing bytes after pixel data".into(),
        });
    }

    HeatMap::from_vec(width, height, data).map_err(|e| Error::HeatMapFormat {
        path: path.into(),
        reason: e.to_string(),
    })
}
