use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{free_components, sample_free_points, WorldgenError};
use crate::gridmap::{Cell, CellState, OccupancyGrid};
use crate::planner::astar;
use crate::sensing::ray;

/// Width of a carved doorway, in meters.
pub const DEFAULT_OPENING_WIDTH: f64 = 0.8;
/// Carves attempted for one point pair before giving up.
pub const MAX_CARVE_RETRIES: usize = 32;

/// One doorway punched through a wall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarvedOpening {
    /// Sample indices of the pair that needed it.
    pub pair: (usize, usize),
    /// Where the sight line between the pair crosses the wall, entry to exit, in meters.
    pub segment: [f64; 4],
    /// Center of the opening, in meters.
    pub center: (f64, f64),
    pub width: f64,
    pub cells_cleared: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RepairReport {
    /// Number of sample points.
    pub m: usize,
    pub samples: Vec<Cell>,
    pub pairs_checked: usize,
    pub carved: Vec<CarvedOpening>,
    pub connected: bool,
}

/// Make `m` random Free samples mutually reachable by punching doorways.
///
/// Pairs are visited by increasing distance (ties by sample indices). A pair
/// already in one Free component is skipped; otherwise an opening of
/// `opening_width` is carved where the straight line between them first
/// crosses a wall, and the pair is re-checked until A* finds a path.
pub fn repair_connectivity(
    grid: &OccupancyGrid,
    m: usize,
    opening_width: f64,
    rng: &mut impl Rng,
) -> Result<(OccupancyGrid, RepairReport), WorldgenError> {
    if !(opening_width > 0.0 && opening_width.is_finite()) {
        return Err(WorldgenError::InvalidParameter {
            name: "opening width",
            expect: "positive",
            value: opening_width,
        });
    }
    let samples = sample_free_points(grid, m, rng)?;
    let mut pairs: Vec<(i64, usize, usize)> = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            let (dx, dy) = ((samples[i].x - samples[j].x) as i64, (samples[i].y - samples[j].y) as i64);
            pairs.push((dx * dx + dy * dy, i, j));
        }
    }
    pairs.sort_unstable();

    let mut out = grid.clone();
    let mut report = RepairReport { m, samples: samples.clone(), ..Default::default() };
    let mut comps = free_components(&out);
    for &(_, i, j) in &pairs {
        report.pairs_checked += 1;
        let (a, b) = (samples[i], samples[j]);
        let mut retries = 0;
        while comps.label(&out, a) != comps.label(&out, b) {
            if retries == MAX_CARVE_RETRIES {
                report.connected = false;
                return Err(WorldgenError::RepairFailed { a, b, retries, report: Box::new(report) });
            }
            retries += 1;
            match carve_between(&mut out, a, b, opening_width) {
                Some(mut opening) => {
                    opening.pair = (i, j);
                    report.carved.push(opening);
                }
                None => {
                    report.connected = false;
                    return Err(WorldgenError::RepairFailed { a, b, retries, report: Box::new(report) });
                }
            }
            comps = free_components(&out);
            if comps.label(&out, a) == comps.label(&out, b) {
                let path = astar(&out, a, b).expect("samples stay free");
                debug_assert!(!path.is_empty());
            }
        }
    }
    report.connected = true;
    Ok((out, report))
}

/// Clear a disc of diameter `width` around the midpoint of the first wall run
/// on the straight line from `a` to `b`. Returns `None` when the line is clear.
fn carve_between(grid: &mut OccupancyGrid, a: Cell, b: Cell, width: f64) -> Option<CarvedOpening> {
    let start = (a.x as f64 + 0.5, a.y as f64 + 0.5);
    let (vx, vy) = ((b.x - a.x) as f64, (b.y - a.y) as f64);
    let len = vx.hypot(vy);
    if len == 0.0 {
        return None;
    }
    let dir = (vx / len, vy / len);
    let mut entry = None;
    let mut exit = len;
    ray::traverse(start, dir, len, |cell, t| {
        let blocked = grid.get(cell) != Some(CellState::Free);
        match (entry, blocked) {
            (None, true) => entry = Some(t),
            (Some(_), false) => {
                exit = t;
                return false;
            }
            _ => {}
        }
        true
    });
    let t0 = entry?;
    let tc = 0.5 * (t0 + exit);
    let res = grid.resolution();
    let (cx, cy) = (start.0 + dir.0 * tc, start.1 + dir.1 * tc);
    let r = 0.5 * width / res;
    let mut cleared = 0;
    // the outermost ring stays closed so the plan keeps an outer wall
    let (w, h) = (grid.width() as i32, grid.height() as i32);
    let inside = |c: Cell| c.x > 0 && c.y > 0 && c.x < w - 1 && c.y < h - 1;
    for y in (cy - r).floor() as i32..=(cy + r).ceil() as i32 {
        for x in (cx - r).floor() as i32..=(cx + r).ceil() as i32 {
            let c = Cell::new(x, y);
            let (dx, dy) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
            if dx * dx + dy * dy <= r * r && inside(c) && grid.get(c).is_some_and(|s| s != CellState::Free) {
                grid.set(c, CellState::Free);
                cleared += 1;
            }
        }
    }
    let (ox, oy) = grid.origin();
    let world = |t: f64| (ox + (start.0 + dir.0 * t) * res, oy + (start.1 + dir.1 * t) * res);
    let (p, q) = (world(t0), world(exit));
    Some(CarvedOpening {
        pair: (0, 0),
        segment: [p.0, p.1, q.0, q.1],
        center: (ox + cx * res, oy + cy * res),
        width,
        cells_cleared: cleared,
    })
}
