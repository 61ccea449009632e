//! Occupancy rasters: the ground truth, scan sectors, and the built map all
//! share [`OccupancyGrid`]. This module also owns plan rasterization,
//! egocentric cropping, similarity metrics, and grayscale image I/O.

mod crop;
mod grid;
mod metrics;
mod png_io;
mod raster;

pub use crop::crop_local;
pub use grid::{normalize_angle, Cell, CellState, OccupancyGrid, Pose};
pub use metrics::{iou_free, iou_obstacle, restrict_to_observed};
pub use png_io::{parse_png, render_png, render_raw, Palette};
pub use raster::{rasterize, DEFAULT_WALL_THICKNESS};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("resolution must be positive and finite, got {0}")]
    InvalidResolution(f64),
    #[error("grid origin must be finite")]
    NonFiniteOrigin,
    #[error("raster length {len} does not match {width}x{height}")]
    RasterLength { width: usize, height: usize, len: usize },
    #[error("grid of {width}x{height} cells is too large")]
    TooLarge { width: usize, height: usize },
    #[error("unrecognised grid glyph {0:?}")]
    BadGlyph(char),
    #[error("grid dimensions differ: {a:?} vs {b:?}")]
    DimensionMismatch { a: (usize, usize), b: (usize, usize) },
    #[error("degenerate floor plan: {0}")]
    DegeneratePlan(String),
    #[error("wall thickness must be non-negative and finite, got {0}")]
    InvalidThickness(f64),
    #[error("crop side must be positive, got {0}")]
    InvalidSide(f64),
    #[error("unknown palette {0:?} (expected \"dataset\" or \"observation\")")]
    UnknownPalette(String),
    #[error("pixel value {value} at ({x}, {y}) is not part of the {palette} palette")]
    BadPixel { value: u8, x: usize, y: usize, palette: &'static str },
    #[error("png encoding failed: {0}")]
    PngEncode(#[from] png::EncodingError),
    #[error("png decoding failed: {0}")]
    PngDecode(#[from] png::DecodingError),
    #[error("png must be 8-bit grayscale, got {0}")]
    PngFormat(String),
}
