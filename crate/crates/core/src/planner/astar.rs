use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::Serialize;

use super::PlannerError;
use crate::gridmap::{Cell, CellState, OccupancyGrid};

pub(crate) const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// 8-connected moves: the four straight ones first.
pub(crate) const MOVES: [(i32, i32); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, 1), (1, -1), (-1, -1)];

/// A grid path, start and goal inclusive. Empty means unreachable.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Path {
    pub cells: Vec<Cell>,
    pub cost: f64,
}

impl Path {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Key {
    f: f64,
    h: f64,
    index: usize,
}

impl Eq for Key {}

impl Ord for Key {
    // lowest f, then closest to goal, then smallest index
    fn cmp(&self, other: &Self) -> Ordering {
        self.f.total_cmp(&other.f).then(self.h.total_cmp(&other.h)).then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn octile(a: Cell, b: Cell) -> f64 {
    let (dx, dy) = ((a.x - b.x).abs() as f64, (a.y - b.y).abs() as f64);
    dx.max(dy) + (SQRT_2 - 1.0) * dx.min(dy)
}

/// Whether the step `from -> from + (dx, dy)` is legal: the target must be
/// passable and a diagonal step needs both orthogonal neighbours passable.
#[inline]
pub(crate) fn step_allowed(passable: &impl Fn(Cell) -> bool, from: Cell, dx: i32, dy: i32) -> bool {
    passable(from.offset(dx, dy))
        && (dx == 0 || dy == 0 || (passable(from.offset(dx, 0)) && passable(from.offset(0, dy))))
}

/// Optimal 8-connected path over Free cells.
///
/// Straight moves cost 1, diagonal moves √2; a diagonal move may not cut past
/// a non-Free cell on either side.
pub fn astar(grid: &OccupancyGrid, start: Cell, goal: Cell) -> Result<Path, PlannerError> {
    for c in [start, goal] {
        if grid.get(c) != Some(CellState::Free) {
            return Err(PlannerError::BlockedEndpoint(c));
        }
    }
    let passable = |c: Cell| grid.get(c) == Some(CellState::Free);
    Ok(astar_with(grid.width(), grid.height(), passable, start, goal))
}

/// A* over an arbitrary passability predicate on a `width` × `height` lattice.
pub fn astar_with(width: usize, height: usize, passable: impl Fn(Cell) -> bool, start: Cell, goal: Cell) -> Path {
    let inside = |c: Cell| c.x >= 0 && c.y >= 0 && (c.x as usize) < width && (c.y as usize) < height;
    let passable = |c: Cell| inside(c) && passable(c);
    if !passable(start) || !passable(goal) {
        return Path::default();
    }
    let index = |c: Cell| c.y as usize * width + c.x as usize;
    let mut g = vec![f64::INFINITY; width * height];
    let mut parent = vec![usize::MAX; width * height];
    let mut closed = vec![false; width * height];
    let mut open = BinaryHeap::new();

    let s = index(start);
    g[s] = 0.0;
    let h0 = octile(start, goal);
    open.push(Reverse(Key { f: h0, h: h0, index: s }));
    while let Some(Reverse(Key { index: i, .. })) = open.pop() {
        if closed[i] {
            continue;
        }
        closed[i] = true;
        let cell = Cell::new((i % width) as i32, (i / width) as i32);
        if cell == goal {
            let mut cells = vec![cell];
            let mut k = i;
            while parent[k] != usize::MAX {
                k = parent[k];
                cells.push(Cell::new((k % width) as i32, (k / width) as i32));
            }
            cells.reverse();
            return Path { cells, cost: g[i] };
        }
        for (dx, dy) in MOVES {
            if !step_allowed(&passable, cell, dx, dy) {
                continue;
            }
            let next = cell.offset(dx, dy);
            let j = index(next);
            if closed[j] {
                continue;
            }
            let cost = g[i] + if dx != 0 && dy != 0 { SQRT_2 } else { 1.0 };
            if cost < g[j] {
                g[j] = cost;
                parent[j] = i;
                let h = octile(next, goal);
                open.push(Reverse(Key { f: cost + h, h, index: j }));
            }
        }
    }
    Path::default()
}
