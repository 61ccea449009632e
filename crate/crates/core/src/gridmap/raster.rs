use std::collections::VecDeque;

use super::{CellState, GridError, OccupancyGrid};
use crate::floorplan::FloorPlan;

/// Default wall thickness in meters.
pub const DEFAULT_WALL_THICKNESS: f64 = 0.1;

const EPS: f64 = 1e-6;

/// Rasterize a line-segment floor plan into a ground-truth grid.
///
/// A cell is a wall cell when the closed square of half-size
/// `max(wall_thickness, resolution) / 2` around its center touches a segment.
/// Everything 4-connected to the grid border without crossing a wall is
/// exterior and becomes Obstacle; the enclosed rest is Free.
pub fn rasterize(plan: &FloorPlan, resolution: f64, wall_thickness: f64) -> Result<OccupancyGrid, GridError> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(GridError::InvalidResolution(resolution));
    }
    if !(wall_thickness >= 0.0 && wall_thickness.is_finite()) {
        return Err(GridError::InvalidThickness(wall_thickness));
    }
    let segments: Vec<[f64; 4]> = plan
        .segments
        .iter()
        .map(|s| [s.x1, s.y1, s.x2, s.y2])
        .filter(|s| (s[2] - s[0]).hypot(s[3] - s[1]) > 1e-12)
        .collect();
    if segments.is_empty() {
        return Err(GridError::DegeneratePlan(if plan.segments.is_empty() {
            format!("plan {:?} has no segments", plan.id)
        } else {
            format!("all {} segments of plan {:?} have zero length", plan.segments.len(), plan.id)
        }));
    }

    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for s in &segments {
        min_x = min_x.min(s[0]).min(s[2]);
        max_x = max_x.max(s[0]).max(s[2]);
        min_y = min_y.min(s[1]).min(s[3]);
        max_y = max_y.max(s[1]).max(s[3]);
    }

    // half-size of the wall brush, in cells
    let half = wall_thickness.max(resolution) / (2.0 * resolution);
    let margin = 1 + (half - 0.5 - EPS).max(0.0).ceil() as usize;
    let span_x = ((max_x - min_x) / resolution - EPS).ceil().max(0.0) as usize;
    let span_y = ((max_y - min_y) / resolution - EPS).ceil().max(0.0) as usize;
    let width = span_x.max(1) + 2 * margin;
    let height = span_y.max(1) + 2 * margin;
    let origin = (min_x - margin as f64 * resolution, min_y - margin as f64 * resolution);

    let mut wall = vec![false; width * height];
    for s in &segments {
        let a = ((s[0] - origin.0) / resolution, (s[1] - origin.1) / resolution);
        let b = ((s[2] - origin.0) / resolution, (s[3] - origin.1) / resolution);
        let lo_x = ((a.0.min(b.0) - half - 1.0).floor().max(0.0)) as usize;
        let hi_x = ((a.0.max(b.0) + half + 1.0).ceil() as usize).min(width - 1);
        let lo_y = ((a.1.min(b.1) - half - 1.0).floor().max(0.0)) as usize;
        let hi_y = ((a.1.max(b.1) + half + 1.0).ceil() as usize).min(height - 1);
        for y in lo_y..=hi_y {
            for x in lo_x..=hi_x {
                let c = (x as f64 + 0.5, y as f64 + 0.5);
                if segment_touches_box(a, b, c, half + EPS) {
                    wall[y * width + x] = true;
                }
            }
        }
    }

    // exterior = non-wall cells 4-connected to the border
    let mut exterior = vec![false; width * height];
    let mut queue = VecDeque::new();
    for y in 0..height {
        for x in 0..width {
            if (x == 0 || y == 0 || x == width - 1 || y == height - 1) && !wall[y * width + x] {
                exterior[y * width + x] = true;
                queue.push_back((x, y));
            }
        }
    }
    while let Some((x, y)) = queue.pop_front() {
        let mut visit = |nx: usize, ny: usize| {
            let i = ny * width + nx;
            if !wall[i] && !exterior[i] {
                exterior[i] = true;
                queue.push_back((nx, ny));
            }
        };
        if x > 0 {
            visit(x - 1, y);
        }
        if x + 1 < width {
            visit(x + 1, y);
        }
        if y > 0 {
            visit(x, y - 1);
        }
        if y + 1 < height {
            visit(x, y + 1);
        }
    }

    let cells =
        wall.iter().zip(&exterior).map(|(&w, &e)| if w || e { CellState::Obstacle } else { CellState::Free }).collect();
    OccupancyGrid::from_cells(width, height, resolution, origin, cells)
}

/// Whether segment `a -> b` intersects the closed axis-aligned square of
/// half-size `h` centered at `c`.
fn segment_touches_box(a: (f64, f64), b: (f64, f64), c: (f64, f64), h: f64) -> bool {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, d, center) in [(a.0, b.0 - a.0, c.0), (a.1, b.1 - a.1, c.1)] {
        let (lo, hi) = (center - h - p, center + h - p);
        if d.abs() < 1e-15 {
            if lo > 0.0 || hi < 0.0 {
                return false;
            }
        } else {
            let (u, v) = if d > 0.0 { (lo / d, hi / d) } else { (hi / d, lo / d) };
            t0 = t0.max(u);
            t1 = t1.min(v);
            if t0 > t1 {
                return false;
            }
        }
    }
    true
}
