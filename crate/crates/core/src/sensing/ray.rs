//! Supercover grid traversal.
//!
//! Walks every cell the ideal segment touches, in order of entry. When the
//! segment passes exactly through a lattice corner, both side cells are
//! reported (x-side first) before the diagonal cell, so a ray can never slip
//! between two diagonally adjacent cells.

use crate::gridmap::Cell;

const CORNER_EPS: f64 = 1e-9;

/// Visit cells along the ray from `start` (cell-space coordinates) in
/// direction `(dx, dy)` (unit length) until the entry parameter exceeds
/// `max_t`. `visit(cell, t_enter)` returns false to stop early.
pub fn traverse(start: (f64, f64), dir: (f64, f64), max_t: f64, mut visit: impl FnMut(Cell, f64) -> bool) {
    let mut cell = Cell::new(start.0.floor() as i32, start.1.floor() as i32);
    if !visit(cell, 0.0) {
        return;
    }
    let step_x = if dir.0 > 0.0 { 1 } else { -1 };
    let step_y = if dir.1 > 0.0 { 1 } else { -1 };
    let axis = |p: f64, d: f64, c: i32| -> (f64, f64) {
        if d.abs() < 1e-15 {
            (f64::INFINITY, f64::INFINITY)
        } else {
            let boundary = if d > 0.0 { c as f64 + 1.0 } else { c as f64 };
            ((boundary - p) / d, 1.0 / d.abs())
        }
    };
    let (mut t_x, delta_x) = axis(start.0, dir.0, cell.x);
    let (mut t_y, delta_y) = axis(start.1, dir.1, cell.y);

    loop {
        if (t_x - t_y).abs() <= CORNER_EPS {
            let t = t_x.min(t_y);
            if t > max_t {
                return;
            }
            if !visit(Cell::new(cell.x + step_x, cell.y), t) || !visit(Cell::new(cell.x, cell.y + step_y), t) {
                return;
            }
            cell = Cell::new(cell.x + step_x, cell.y + step_y);
            t_x += delta_x;
            t_y += delta_y;
            if !visit(cell, t) {
                return;
            }
        } else if t_x < t_y {
            if t_x > max_t {
                return;
            }
            cell.x += step_x;
            let t = t_x;
            t_x += delta_x;
            if !visit(cell, t) {
                return;
            }
        } else {
            if t_y > max_t {
                return;
            }
            cell.y += step_y;
            let t = t_y;
            t_y += delta_y;
            if !visit(cell, t) {
                return;
            }
        }
    }
}

/// All cells visited up to `max_t`, with entry parameters.
pub fn collect(start: (f64, f64), dir: (f64, f64), max_t: f64) -> Vec<(Cell, f64)> {
    let mut out = Vec::new();
    traverse(start, dir, max_t, |c, t| {
        out.push((c, t));
        true
    });
    out
}
