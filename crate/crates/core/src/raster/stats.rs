use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::LabelMap;

const SQRT_2: f64 = core::f64::consts::SQRT_2;
const PI: f64 = core::f64::consts::PI;

/// Moore neighborhood in clockwise order starting west.
const DIRS: [(isize, isize); 8] = [
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
];

/// Area, boundary length, bounding box, and compactness of one component.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentStats {
    pub label: u32,
    /// Pixel count.
    pub area: usize,
    /// Outer-contour length: straight steps weigh 1, diagonal steps sqrt(2).
    pub perimeter: f64,
    /// Inclusive (row0, col0, row1, col1).
    pub bbox: (usize, usize, usize, usize),
    /// `4 * pi * area / perimeter^2`; digital values may exceed 1.
    pub compactness: f64,
}

/// Computes statistics for every component of a label map, ordered by label.
///
/// The boundary length comes from a clockwise Moore-neighbor trace of the
/// outer contour, summing chain steps (1 for axis moves, sqrt(2) for diagonal
/// moves). Single-pixel components get a perimeter of 4 by convention.
pub fn component_stats(lm: &LabelMap) -> Vec<ComponentStats> {
    let (w, h) = (lm.width(), lm.height());
    let count = lm.count();
    if count == 0 {
        return Vec::new();
    }

    struct Acc {
        area: usize,
        bbox: (usize, usize, usize, usize),
        first: (usize, usize),
    }
    let mut accs: Vec<Option<Acc>> = (0..count).map(|_| None).collect();

    for row in 0..h {
        for col in 0..w {
            let label = lm.get(row, col);
            if label == 0 {
                continue;
            }
            let slot = &mut accs[label as usize - 1];
            match slot {
                None => {
                    *slot = Some(Acc {
                        area: 1,
                        bbox: (row, col, row, col),
                        first: (row, col),
                    });
                }
                Some(acc) => {
                    acc.area += 1;
                    acc.bbox.0 = acc.bbox.0.min(row);
                    acc.bbox.1 = acc.bbox.1.min(col);
                    acc.bbox.2 = acc.bbox.2.max(row);
                    acc.bbox.3 = acc.bbox.3.max(col);
                }
            }
        }
    }

    accs.into_iter()
        .enumerate()
        .map(|(i, acc)| {
            let acc = acc.expect("label map uses exactly 1..=count");
            let label = i as u32 + 1;
            let perimeter = trace_perimeter(lm, label, acc.first);
            ComponentStats {
                label,
                area: acc.area,
                perimeter,
                bbox: acc.bbox,
                compactness: 4.0 * PI * acc.area as f64 / (perimeter * perimeter),
            }
        })
        .collect()
}

/// Clockwise Moore-neighbor trace starting from the component's row-major
/// first pixel (whose west neighbor is guaranteed background).
///
/// The tracer state is (pixel, backtrack direction). The first few states can
/// be transient before the walk settles on the boundary cycle, so the step sum
/// is taken between the first and second visit of a repeated state; that
/// window is exactly one full loop of the outer contour.
fn trace_perimeter(lm: &LabelMap, label: u32, start: (usize, usize)) -> f64 {
    let is_fg = |r: isize, c: isize| -> bool {
        r >= 0
            && c >= 0
            && (r as usize) < lm.height()
            && (c as usize) < lm.width()
            && lm.get(r as usize, c as usize) == label
    };

    let mut pos = (start.0 as isize, start.1 as isize);
    let mut backtrack = 0usize; // west
    let mut cum = 0.0f64;
    let mut seen: BTreeMap<(isize, isize, usize), f64> = BTreeMap::new();
    seen.insert((pos.0, pos.1, backtrack), 0.0);

    // One loop visits each boundary pixel at most four times.
    let limit = 32 * lm.width() * lm.height() + 64;
    for _ in 0..limit {
        let mut found = None;
        let mut prev = (pos.0 + DIRS[backtrack].0, pos.1 + DIRS[backtrack].1);
        for k in 1..=8 {
            let idx = (backtrack + k) % 8;
            let cell = (pos.0 + DIRS[idx].0, pos.1 + DIRS[idx].1);
            if is_fg(cell.0, cell.1) {
                found = Some((cell, idx, prev));
                break;
            }
            prev = cell;
        }
        let Some((next, dir, prev)) = found else {
            // No foreground neighbor: single-pixel component.
            return 4.0;
        };

        let (dr, dc) = DIRS[dir];
        cum += if dr != 0 && dc != 0 { SQRT_2 } else { 1.0 };

        let delta = (prev.0 - next.0, prev.1 - next.1);
        backtrack = DIRS
            .iter()
            .position(|&d| d == delta)
            .expect("consecutive Moore cells are adjacent");
        pos = next;

        match seen.get(&(pos.0, pos.1, backtrack)) {
            Some(&at) => return cum - at,
            None => {
                seen.insert((pos.0, pos.1, backtrack), cum);
            }
        }
    }
    debug_assert!(false, "Moore trace failed to close");
    cum
}
