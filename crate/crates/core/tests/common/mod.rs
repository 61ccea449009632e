//! Reference implementations shared by the integration tests. Deliberately
//! naive so they share no code with the library.
#![allow(dead_code)]

use gridslam::gridmap::{Cell, CellState, OccupancyGrid};
use rand::Rng;

/// Random grid with each cell an obstacle with probability `p`.
pub fn random_grid(w: usize, h: usize, p: f64, rng: &mut impl Rng) -> OccupancyGrid {
    let cells = (0..w * h).map(|_| if rng.random_bool(p) { CellState::Obstacle } else { CellState::Free }).collect();
    OccupancyGrid::from_cells(w, h, 0.1, (0.0, 0.0), cells).unwrap()
}

fn free(g: &OccupancyGrid, x: i32, y: i32) -> bool {
    x >= 0
        && y >= 0
        && (x as usize) < g.width()
        && (y as usize) < g.height()
        && g.get(Cell::new(x, y)) == Some(CellState::Free)
}

/// Uniform-cost search by repeated linear scans for the cheapest open node.
/// Straight moves cost 1, diagonals √2 and need both side cells free.
pub fn ucs_cost(g: &OccupancyGrid, s: Cell, t: Cell) -> Option<f64> {
    let (w, h) = (g.width() as i32, g.height() as i32);
    let n = (w * h) as usize;
    let mut dist = vec![f64::INFINITY; n];
    let mut closed = vec![false; n];
    dist[(s.y * w + s.x) as usize] = 0.0;
    loop {
        let mut best = None;
        for i in 0..n {
            if !closed[i] && dist[i].is_finite() && best.is_none_or(|b: usize| dist[i] < dist[b]) {
                best = Some(i);
            }
        }
        let u = best?;
        closed[u] = true;
        let (x, y) = ((u as i32) % w, (u as i32) / w);
        if x == t.x && y == t.y {
            return Some(dist[u]);
        }
        for dy in -1..=1 {
            for dx in -1..=1 {
                if (dx, dy) == (0, 0) || !free(g, x + dx, y + dy) {
                    continue;
                }
                let diag = dx != 0 && dy != 0;
                if diag && !(free(g, x + dx, y) && free(g, x, y + dy)) {
                    continue;
                }
                let v = ((y + dy) * w + x + dx) as usize;
                let c = dist[u] + if diag { std::f64::consts::SQRT_2 } else { 1.0 };
                if c < dist[v] {
                    dist[v] = c;
                }
            }
        }
    }
}

/// 4-connected flood fill from `s` over Free cells.
pub fn bfs_reach(g: &OccupancyGrid, s: Cell) -> Vec<bool> {
    let w = g.width() as i32;
    let mut seen = vec![false; g.len()];
    if !free(g, s.x, s.y) {
        return seen;
    }
    let mut queue = std::collections::VecDeque::from([s]);
    seen[(s.y * w + s.x) as usize] = true;
    while let Some(c) = queue.pop_front() {
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let (x, y) = (c.x + dx, c.y + dy);
            if free(g, x, y) && !seen[(y * w + x) as usize] {
                seen[(y * w + x) as usize] = true;
                queue.push_back(Cell::new(x, y));
            }
        }
    }
    seen
}

/// True when all Free cells form one 4-connected region.
pub fn free_space_connected(g: &OccupancyGrid) -> bool {
    let Some(first) = g.cells().iter().position(|&s| s == CellState::Free) else {
        return true;
    };
    let seen = bfs_reach(g, g.cell_at_index(first));
    g.cells().iter().zip(&seen).all(|(&s, &r)| s != CellState::Free || r)
}

/// Checks that `cells` is a legal 8-connected walk over Free cells and
/// returns its length under the same cost model.
pub fn walk_cost(g: &OccupancyGrid, cells: &[Cell]) -> f64 {
    let mut cost = 0.0;
    for pair in cells.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        assert!(dx.abs() <= 1 && dy.abs() <= 1 && (dx, dy) != (0, 0), "non-adjacent step {a} -> {b}");
        assert!(free(g, b.x, b.y), "step into blocked cell {b}");
        if dx != 0 && dy != 0 {
            assert!(free(g, a.x + dx, a.y) && free(g, a.x, a.y + dy), "corner cut at {a} -> {b}");
            cost += std::f64::consts::SQRT_2;
        } else {
            cost += 1.0;
        }
    }
    cost
}

/// Cells reachable from `s` by 8-connected moves under the same corner rule
/// as the planner, by breadth-first search.
pub fn bfs8_reach(g: &OccupancyGrid, s: Cell) -> Vec<bool> {
    let w = g.width() as i32;
    let mut seen = vec![false; g.len()];
    if !free(g, s.x, s.y) {
        return seen;
    }
    let mut queue = std::collections::VecDeque::from([s]);
    seen[(s.y * w + s.x) as usize] = true;
    while let Some(c) = queue.pop_front() {
        for dy in -1..=1 {
            for dx in -1..=1 {
                let (x, y) = (c.x + dx, c.y + dy);
                if (dx, dy) == (0, 0) || !free(g, x, y) || seen[(y * w + x) as usize] {
                    continue;
                }
                if dx != 0 && dy != 0 && !(free(g, c.x + dx, c.y) && free(g, c.x, c.y + dy)) {
                    continue;
                }
                seen[(y * w + x) as usize] = true;
                queue.push_back(Cell::new(x, y));
            }
        }
    }
    seen
}
