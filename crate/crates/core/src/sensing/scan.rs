use serde::{Deserialize, Serialize};

use super::{ray, SensingError};
use crate::gridmap::{Cell, CellState, OccupancyGrid, Pose};

/// Lidar model: range in meters, field of view and angular step in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorSpec {
    pub range: f64,
    #[serde(default = "default_fov")]
    pub fov: f64,
    /// Ray spacing; defaults to the angle one cell subtends at max range.
    #[serde(default)]
    pub angular_step: Option<f64>,
}

fn default_fov() -> f64 {
    360.0
}

impl Default for SensorSpec {
    fn default() -> Self {
        Self { range: 5.0, fov: 360.0, angular_step: None }
    }
}

impl SensorSpec {
    /// Largest admissible angular step (degrees) at `resolution`.
    pub fn max_step(&self, resolution: f64) -> f64 {
        resolution.atan2(self.range).to_degrees()
    }

    pub fn step(&self, resolution: f64) -> f64 {
        self.angular_step.unwrap_or_else(|| self.max_step(resolution))
    }

    pub fn validate(&self, resolution: f64) -> Result<(), SensingError> {
        if !(self.range > 0.0 && self.range.is_finite()) {
            return Err(SensingError::InvalidSensor(format!("range must be positive, got {}", self.range)));
        }
        if !(self.fov > 0.0 && self.fov <= 360.0) {
            return Err(SensingError::InvalidSensor(format!("fov must be in (0, 360], got {}", self.fov)));
        }
        let step = self.step(resolution);
        if step.is_nan() || step <= 0.0 {
            return Err(SensingError::InvalidSensor(format!("angular step must be positive, got {step}")));
        }
        let max = self.max_step(resolution);
        if step > max * (1.0 + 1e-9) {
            return Err(SensingError::InvalidSensor(format!(
                "angular step {step:.4} deg leaves gaps at max range (limit {max:.4} deg)"
            )));
        }
        Ok(())
    }

    /// Ray bearings (radians) relative to the heading.
    pub fn bearings(&self, resolution: f64) -> Vec<f64> {
        let step = self.step(resolution);
        if self.fov >= 360.0 {
            let n = (360.0 / step - 1e-9).ceil().max(1.0) as usize;
            (0..n).map(|k| (k as f64 * 360.0 / n as f64).to_radians()).collect()
        } else {
            let n = (self.fov / step - 1e-9).ceil().max(1.0) as usize + 1;
            let half = self.fov / 2.0;
            (0..n).map(|k| (-half + k as f64 * self.fov / (n - 1) as f64).to_radians()).collect()
        }
    }
}

/// Where a ray stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayEnd {
    /// Absolute bearing in radians.
    pub angle: f64,
    /// Last cell written by the ray, in ground-truth lattice coordinates.
    pub cell: Cell,
    /// Entry parameter of `cell`, in cells along the ray.
    pub t: f64,
    /// Whether `cell` is an obstacle return.
    pub hit: bool,
}

/// One simulated lidar sector.
///
/// `grid` is a window of the ground-truth lattice around the robot; cells
/// outside the visible wedge are Unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorScan {
    pub grid: OccupancyGrid,
    pub center: Pose,
    /// Ray endpoints as cast; emptied once the sector has been re-registered.
    pub rays: Vec<RayEnd>,
    /// Ray origin in ground-truth cell coordinates.
    pub(crate) start: (f64, f64),
    /// Ground-truth cell of the window's (0, 0).
    pub(crate) corner: Cell,
    pub(crate) range_cells: f64,
}

impl SectorScan {
    #[inline]
    pub(crate) fn local(&self, cell: Cell) -> Cell {
        Cell::new(cell.x - self.corner.x, cell.y - self.corner.y)
    }

    /// Max sensing range in cells.
    pub fn range_cells(&self) -> f64 {
        self.range_cells
    }

    /// Write one ray into `grid`: Free up to `end.cell`, which becomes
    /// Obstacle on a hit. Obstacle cells are never downgraded.
    pub(crate) fn render_ray(&mut self, end: &RayEnd) {
        let dir = (end.angle.cos(), end.angle.sin());
        let corner = self.corner;
        let grid = &mut self.grid;
        ray::traverse(self.start, dir, end.t + 1e-9, |cell, _| {
            let local = Cell::new(cell.x - corner.x, cell.y - corner.y);
            let is_end = cell == end.cell;
            let state = if is_end && end.hit { CellState::Obstacle } else { CellState::Free };
            if let Some(i) = grid.index(local) {
                if grid.cells()[i] != CellState::Obstacle {
                    grid.cells_mut()[i] = state;
                }
            }
            !is_end
        });
    }

    /// Rebuild `grid` from `rays`.
    pub(crate) fn rerender(&mut self) {
        self.grid.fill(CellState::Unknown);
        let rays = std::mem::take(&mut self.rays);
        for end in &rays {
            self.render_ray(end);
        }
        self.rays = rays;
    }
}

/// Simulate one scan at `pose`.
///
/// Each ray walks its supercover cells from the robot: cells before the first
/// obstacle are Free, the obstacle itself is Obstacle, the rest of the ray is
/// never observed. Rays also stop where the ground truth ends.
pub fn scan(ground_truth: &OccupancyGrid, pose: Pose, sensor: &SensorSpec) -> Result<SectorScan, SensingError> {
    let res = ground_truth.resolution();
    sensor.validate(res)?;
    let robot = ground_truth.world_to_cell(pose.x, pose.y);
    match ground_truth.get(robot) {
        None => return Err(SensingError::PoseOutsideMap(pose)),
        Some(CellState::Obstacle) => return Err(SensingError::PoseInObstacle(pose)),
        Some(_) => {}
    }
    let range_cells = sensor.range / res;
    let reach = range_cells.ceil() as i32 + 1;
    let corner = robot.offset(-reach, -reach);
    let side = (2 * reach + 1) as usize;
    let origin = (ground_truth.origin().0 + corner.x as f64 * res, ground_truth.origin().1 + corner.y as f64 * res);
    let grid =
        OccupancyGrid::filled(side, side, res, origin, CellState::Unknown).expect("sector window is well-formed");
    let start = ground_truth.world_to_grid(pose.x, pose.y);
    let mut sector = SectorScan { grid, center: pose, rays: Vec::new(), start, corner, range_cells };

    let bearings = sensor.bearings(res);
    let mut rays = Vec::with_capacity(bearings.len());
    for bearing in bearings {
        let angle = pose.theta + bearing;
        let dir = (angle.cos(), angle.sin());
        let mut end = RayEnd { angle, cell: robot, t: 0.0, hit: false };
        let grid = &mut sector.grid;
        ray::traverse(start, dir, range_cells, |cell, t| {
            let state = match ground_truth.get(cell) {
                Some(s) if s != CellState::Unknown => s,
                // off the map or unmapped: nothing more to see
                _ => return false,
            };
            end = RayEnd { angle, cell, t, hit: state == CellState::Obstacle };
            let local = Cell::new(cell.x - corner.x, cell.y - corner.y);
            if let Some(i) = grid.index(local) {
                if grid.cells()[i] != CellState::Obstacle {
                    grid.cells_mut()[i] = state;
                }
            }
            state != CellState::Obstacle
        });
        rays.push(end);
    }
    sector.rays = rays;
    Ok(sector)
}
