//! Raster types and image operators.
//!
//! The carriers are plain row-major buffers: [`GrayImage`] for real-valued
//! rasters, [`BinaryImage`] for masks, and [`LabelMap`] for component labels.
//! Intensity images conventionally lie in `[0, 1]`; filter responses (edge
//! magnitudes) reuse [`GrayImage`] without range clamping.

mod blur;
mod edge;
mod fit;
mod image;
mod label;
mod morphology;
mod stats;
mod threshold;

pub use blur::gaussian_blur;
pub use edge::{edge_filter, EdgeKind};
pub use fit::center_fit;
pub use image::{BinaryImage, GrayImage, LabelMap};
pub use label::{connected_components, Connectivity};
pub use morphology::{morphology, MorphOp, StructuringElement};
pub use stats::{component_stats, ComponentStats};
pub use threshold::otsu_threshold;
