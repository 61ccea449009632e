use std::io::Cursor;
use std::str::FromStr;

use super::{CellState, GridError, OccupancyGrid};

/// Grayscale encodings of the three cell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Palette {
    /// Obstacle black, Free white, Unknown light gray (200).
    Dataset,
    /// Unknown black, Obstacle white, Free mid gray (128).
    Observation,
}

impl Palette {
    pub fn name(self) -> &'static str {
        match self {
            Palette::Dataset => "dataset",
            Palette::Observation => "observation",
        }
    }

    #[inline]
    pub fn value(self, state: CellState) -> u8 {
        match (self, state) {
            (Palette::Dataset, CellState::Obstacle) => 0,
            (Palette::Dataset, CellState::Free) => 255,
            (Palette::Dataset, CellState::Unknown) => 200,
            (Palette::Observation, CellState::Unknown) => 0,
            (Palette::Observation, CellState::Obstacle) => 255,
            (Palette::Observation, CellState::Free) => 128,
        }
    }

    pub fn state(self, value: u8) -> Option<CellState> {
        CellState::ALL.into_iter().find(|&s| self.value(s) == value)
    }
}

impl FromStr for Palette {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dataset" => Ok(Palette::Dataset),
            "observation" => Ok(Palette::Observation),
            other => Err(GridError::UnknownPalette(other.to_string())),
        }
    }
}

/// One byte per cell, northernmost row first.
pub fn render_raw(map: &OccupancyGrid, palette: Palette) -> Vec<u8> {
    let (w, h) = (map.width(), map.height());
    let mut out = Vec::with_capacity(w * h);
    for y in (0..h).rev() {
        out.extend(map.cells()[y * w..(y + 1) * w].iter().map(|&s| palette.value(s)));
    }
    out
}

/// Encode `map` as an 8-bit grayscale PNG, one pixel per cell, row 0 north.
pub fn render_png(map: &OccupancyGrid, palette: Palette) -> Result<Vec<u8>, GridError> {
    let mut bytes = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut bytes, map.width() as u32, map.height() as u32);
        encoder.set_color(png::ColorType::Grayscale);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header()?;
        writer.write_image_data(&render_raw(map, palette))?;
        writer.finish()?;
    }
    Ok(bytes)
}

/// Decode a PNG written by [`render_png`]. The image carries no placement,
/// so the caller supplies resolution and origin.
pub fn parse_png(
    bytes: &[u8],
    palette: Palette,
    resolution: f64,
    origin: (f64, f64),
) -> Result<OccupancyGrid, GridError> {
    let decoder = png::Decoder::new(Cursor::new(bytes));
    let mut reader = decoder.read_info()?;
    let info = reader.info();
    if info.color_type != png::ColorType::Grayscale || info.bit_depth != png::BitDepth::Eight {
        return Err(GridError::PngFormat(format!("{:?}/{:?}", info.color_type, info.bit_depth)));
    }
    let (w, h) = (info.width as usize, info.height as usize);
    let mut buf = vec![0u8; reader.output_buffer_size().unwrap_or(w * h)];
    let frame = reader.next_frame(&mut buf)?;
    let stride = frame.line_size;
    let mut cells = vec![CellState::Unknown; w * h];
    for row in 0..h {
        let y = h - 1 - row;
        for x in 0..w {
            let value = buf[row * stride + x];
            cells[y * w + x] =
                palette.state(value).ok_or(GridError::BadPixel { value, x, y: row, palette: palette.name() })?;
        }
    }
    OccupancyGrid::from_cells(w, h, resolution, origin, cells)
}
