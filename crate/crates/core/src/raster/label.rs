use alloc::vec;
use alloc::vec::Vec;

use super::{BinaryImage, LabelMap};

/// Pixel adjacency for component labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    fn neighbors(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::Four => &[(-1, 0), (0, -1), (0, 1), (1, 0)],
            Connectivity::Eight => &[
                (-1, -1),
                (-1, 0),
                (-1, 1),
                (0, -1),
                (0, 1),
                (1, -1),
                (1, 0),
                (1, 1),
            ],
        }
    }
}

/// Labels maximal connected true-regions `1..=count` in the order their first
/// pixel appears in a row-major scan.
pub fn connected_components(bin: &BinaryImage, connectivity: Connectivity) -> LabelMap {
    let (w, h) = (bin.width(), bin.height());
    let mut labels = vec![0u32; w * h];
    let mut count = 0u32;
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let neighbors = connectivity.neighbors();

    for row in 0..h {
        for col in 0..w {
            if !bin.get(row, col) || labels[row * w + col] != 0 {
                continue;
            }
            count += 1;
            labels[row * w + col] = count;
            stack.push((row, col));
            while let Some((r, c)) = stack.pop() {
                for &(dr, dc) in neighbors {
                    let (nr, nc) = (r as isize + dr, c as isize + dc);
                    if nr < 0 || nc < 0 || nr as usize >= h || nc as usize >= w {
                        continue;
                    }
                    let (nr, nc) = (nr as usize, nc as usize);
                    if bin.get(nr, nc) && labels[nr * w + nc] == 0 {
                        labels[nr * w + nc] = count;
                        stack.push((nr, nc));
                    }
                }
            }
        }
    }

    LabelMap::from_parts(w, h, labels, count as usize)
}
