use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GridError;

/// State of a single map cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[repr(u8)]
pub enum CellState {
    /// Never observed.
    #[default]
    Unknown,
    Free,
    Obstacle,
}

impl CellState {
    pub const ALL: [CellState; 3] = [CellState::Unknown, CellState::Free, CellState::Obstacle];

    #[inline]
    pub fn is_known(self) -> bool {
        self != CellState::Unknown
    }
}

/// Integer cell coordinate. `x` is the column, `y` the row; rows grow
/// northwards (+y in world coordinates).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    #[inline]
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn offset(self, dx: i32, dy: i32) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Normalize an angle to `[-pi, pi)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = (theta + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can round up to exactly 2*pi for tiny negative inputs
    if t >= PI {
        t -= 2.0 * PI;
    }
    t
}

/// Planar robot pose in world coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    /// Heading in radians, kept in `[-pi, pi)`.
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self { x, y, theta: normalize_angle(theta) }
    }

    pub fn rotated(self, delta: f64) -> Self {
        Self::new(self.x, self.y, self.theta + delta)
    }

    pub fn advanced(self, distance: f64) -> Self {
        Self::new(self.x + distance * self.theta.cos(), self.y + distance * self.theta.sin(), self.theta)
    }
}

/// Three-state occupancy raster with a world placement.
///
/// Cells are stored row-major; row 0 is the southernmost row and cell
/// `(0, 0)` covers `[origin.0, origin.0 + resolution) x [origin.1, origin.1 + resolution)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    width: usize,
    height: usize,
    resolution: f64,
    origin: (f64, f64),
    cells: Vec<CellState>,
}

impl OccupancyGrid {
    /// A grid filled with `fill`.
    pub fn filled(
        width: usize,
        height: usize,
        resolution: f64,
        origin: (f64, f64),
        fill: CellState,
    ) -> Result<Self, GridError> {
        Self::from_cells(width, height, resolution, origin, vec![fill; width * height])
    }

    pub fn from_cells(
        width: usize,
        height: usize,
        resolution: f64,
        origin: (f64, f64),
        cells: Vec<CellState>,
    ) -> Result<Self, GridError> {
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(GridError::InvalidResolution(resolution));
        }
        if !(origin.0.is_finite() && origin.1.is_finite()) {
            return Err(GridError::NonFiniteOrigin);
        }
        if width.checked_mul(height) != Some(cells.len()) {
            return Err(GridError::RasterLength { width, height, len: cells.len() });
        }
        if width > i32::MAX as usize || height > i32::MAX as usize {
            return Err(GridError::TooLarge { width, height });
        }
        Ok(Self { width, height, resolution, origin, cells })
    }

    /// Build a grid from text rows, north row first: `#` obstacle, `.` free,
    /// `?` unknown. Mostly useful in tests.
    pub fn from_ascii(rows: &[&str], resolution: f64) -> Result<Self, GridError> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut cells = vec![CellState::Unknown; width * height];
        for (i, row) in rows.iter().enumerate() {
            let y = height - 1 - i;
            let chars: Vec<char> = row.chars().collect();
            if chars.len() != width {
                return Err(GridError::RasterLength { width, height, len: chars.len() * height });
            }
            for (x, ch) in chars.into_iter().enumerate() {
                cells[y * width + x] = match ch {
                    '#' => CellState::Obstacle,
                    '.' => CellState::Free,
                    '?' => CellState::Unknown,
                    other => return Err(GridError::BadGlyph(other)),
                };
            }
        }
        Self::from_cells(width, height, resolution, (0.0, 0.0), cells)
    }

    /// Inverse of [`OccupancyGrid::from_ascii`].
    pub fn to_ascii(&self) -> String {
        let mut out = String::with_capacity((self.width + 1) * self.height);
        for y in (0..self.height).rev() {
            for x in 0..self.width {
                out.push(match self.cells[y * self.width + x] {
                    CellState::Obstacle => '#',
                    CellState::Free => '.',
                    CellState::Unknown => '?',
                });
            }
            out.push('\n');
        }
        out
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    #[inline]
    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    #[inline]
    pub fn cells(&self) -> &[CellState] {
        &self.cells
    }

    #[inline]
    pub fn cells_mut(&mut self) -> &mut [CellState] {
        &mut self.cells
    }

    pub fn into_cells(self) -> Vec<CellState> {
        self.cells
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn contains(&self, cell: Cell) -> bool {
        cell.x >= 0 && cell.y >= 0 && (cell.x as usize) < self.width && (cell.y as usize) < self.height
    }

    #[inline]
    pub fn index(&self, cell: Cell) -> Option<usize> {
        self.contains(cell).then(|| cell.y as usize * self.width + cell.x as usize)
    }

    #[inline]
    pub fn cell_at_index(&self, index: usize) -> Cell {
        Cell::new((index % self.width) as i32, (index / self.width) as i32)
    }

    #[inline]
    pub fn get(&self, cell: Cell) -> Option<CellState> {
        self.index(cell).map(|i| self.cells[i])
    }

    /// Cell state, or `Unknown` outside the raster.
    #[inline]
    pub fn get_or_unknown(&self, cell: Cell) -> CellState {
        self.get(cell).unwrap_or(CellState::Unknown)
    }

    /// Writes `state` at `cell`; returns false when the cell is out of bounds.
    #[inline]
    pub fn set(&mut self, cell: Cell, state: CellState) -> bool {
        match self.index(cell) {
            Some(i) => {
                self.cells[i] = state;
                true
            }
            None => false,
        }
    }

    /// Continuous cell-space coordinates of a world point.
    #[inline]
    pub fn world_to_grid(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.origin.0) / self.resolution, (y - self.origin.1) / self.resolution)
    }

    #[inline]
    pub fn world_to_cell(&self, x: f64, y: f64) -> Cell {
        let (gx, gy) = self.world_to_grid(x, y);
        Cell::new(gx.floor() as i32, gy.floor() as i32)
    }

    #[inline]
    pub fn cell_center(&self, cell: Cell) -> (f64, f64) {
        (
            self.origin.0 + (cell.x as f64 + 0.5) * self.resolution,
            self.origin.1 + (cell.y as f64 + 0.5) * self.resolution,
        )
    }

    pub fn count(&self, state: CellState) -> usize {
        self.cells.iter().filter(|&&c| c == state).count()
    }

    pub fn known_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_known()).count()
    }

    pub fn fill(&mut self, state: CellState) {
        self.cells.fill(state);
    }

    /// Copy of the sub-rectangle starting at `corner` (clipped cells become Unknown).
    pub fn window(&self, corner: Cell, width: usize, height: usize) -> OccupancyGrid {
        let mut cells = vec![CellState::Unknown; width * height];
        for y in 0..height {
            for x in 0..width {
                cells[y * width + x] = self.get_or_unknown(corner.offset(x as i32, y as i32));
            }
        }
        let origin =
            (self.origin.0 + corner.x as f64 * self.resolution, self.origin.1 + corner.y as f64 * self.resolution);
        OccupancyGrid { width, height, resolution: self.resolution, origin, cells }
    }

    /// Same raster and placement, different cell contents.
    pub fn with_cells(&self, cells: Vec<CellState>) -> Result<OccupancyGrid, GridError> {
        Self::from_cells(self.width, self.height, self.resolution, self.origin, cells)
    }

    /// Integer offset of `other`'s lattice relative to this one, if both
    /// lattices coincide.
    pub fn lattice_offset(&self, other: &OccupancyGrid) -> Option<(i32, i32)> {
        if (self.resolution - other.resolution).abs() > 1e-9 * self.resolution {
            return None;
        }
        let fx = (other.origin.0 - self.origin.0) / self.resolution;
        let fy = (other.origin.1 - self.origin.1) / self.resolution;
        let (rx, ry) = (fx.round(), fy.round());
        ((fx - rx).abs() < 1e-6 && (fy - ry).abs() < 1e-6).then_some((rx as i32, ry as i32))
    }

    /// Enlarge the raster (new cells Unknown) so that the inclusive cell
    /// range `lo..=hi` fits. Returns the shift that old cell coordinates
    /// receive.
    pub fn grow_to_include(&mut self, lo: Cell, hi: Cell) -> (i32, i32) {
        let min_x = lo.x.min(0);
        let min_y = lo.y.min(0);
        let max_x = hi.x.max(self.width as i32 - 1);
        let max_y = hi.y.max(self.height as i32 - 1);
        if min_x == 0 && min_y == 0 && max_x == self.width as i32 - 1 && max_y == self.height as i32 - 1 {
            return (0, 0);
        }
        let (w, h) = ((max_x - min_x + 1) as usize, (max_y - min_y + 1) as usize);
        let (sx, sy) = (-min_x, -min_y);
        let mut cells = vec![CellState::Unknown; w * h];
        for y in 0..self.height {
            let dst = (y + sy as usize) * w + sx as usize;
            cells[dst..dst + self.width].copy_from_slice(&self.cells[y * self.width..(y + 1) * self.width]);
        }
        self.origin = (self.origin.0 + min_x as f64 * self.resolution, self.origin.1 + min_y as f64 * self.resolution);
        self.width = w;
        self.height = h;
        self.cells = cells;
        (sx, sy)
    }

    /// Whether a disc of `radius` meters at world `(x, y)` overlaps the
    /// interior of any Obstacle cell. Cells off the raster are ignored.
    pub fn disc_hits_obstacle(&self, x: f64, y: f64, radius: f64) -> bool {
        let (gx, gy) = self.world_to_grid(x, y);
        let r = radius / self.resolution;
        let (x0, x1) = ((gx - r).floor() as i32, (gx + r).floor() as i32);
        let (y0, y1) = ((gy - r).floor() as i32, (gy + r).floor() as i32);
        for cy in y0.max(0)..=y1.min(self.height as i32 - 1) {
            for cx in x0.max(0)..=x1.min(self.width as i32 - 1) {
                if self.cells[cy as usize * self.width + cx as usize] != CellState::Obstacle {
                    continue;
                }
                let dx = (cx as f64 - gx).max(0.0).max(gx - (cx + 1) as f64);
                let dy = (cy as f64 - gy).max(0.0).max(gy - (cy + 1) as f64);
                if dx * dx + dy * dy < r * r {
                    return true;
                }
            }
        }
        false
    }

    /// Neighbours in 4-connectivity that lie inside the raster.
    pub fn neighbors4(&self, cell: Cell) -> impl Iterator<Item = Cell> + '_ {
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .map(move |(dx, dy)| cell.offset(dx, dy))
            .filter(move |c| self.contains(*c))
    }
}
