use super::WorldgenError;
use crate::gridmap::{Cell, CellState, OccupancyGrid};

/// Close one-cell nicks in the walls (3×3 morphological closing of the
/// obstacle mask), then crop to the house: every Free cell and the walls
/// touching it, plus one cell of margin.
///
/// Off-map cells count as obstacle, so closing never eats into the border.
pub fn refine_and_crop(grid: &OccupancyGrid) -> Result<OccupancyGrid, WorldgenError> {
    if grid.count(CellState::Free) == 0 {
        return Err(WorldgenError::AllObstacle);
    }
    let (w, h) = (grid.width() as i32, grid.height() as i32);
    let blocked = |g: &[bool], x: i32, y: i32| x < 0 || y < 0 || x >= w || y >= h || g[(y * w + x) as usize];
    let mask: Vec<bool> = grid.cells().iter().map(|&s| s != CellState::Free).collect();

    let window = |g: &[bool], x: i32, y: i32, all: bool| {
        let mut it =
            (-1..=1).flat_map(|dy| (-1..=1).map(move |dx| (dx, dy))).map(|(dx, dy)| blocked(g, x + dx, y + dy));
        if all {
            it.all(|b| b)
        } else {
            it.any(|b| b)
        }
    };
    let dilated: Vec<bool> = (0..w * h).map(|i| window(&mask, i % w, i / w, false)).collect();
    let closed: Vec<bool> = (0..w * h).map(|i| window(&dilated, i % w, i / w, true)).collect();

    let mut refined = grid.clone();
    for (i, cell) in refined.cells_mut().iter_mut().enumerate() {
        if closed[i] && *cell == CellState::Free {
            *cell = CellState::Obstacle;
        }
    }
    if refined.count(CellState::Free) == 0 {
        return Err(WorldgenError::AllObstacle);
    }

    let (mut lo, mut hi) = (Cell::new(i32::MAX, i32::MAX), Cell::new(i32::MIN, i32::MIN));
    for i in 0..refined.len() {
        if refined.cells()[i] == CellState::Free {
            let c = refined.cell_at_index(i);
            lo = Cell::new(lo.x.min(c.x), lo.y.min(c.y));
            hi = Cell::new(hi.x.max(c.x), hi.y.max(c.y));
        }
    }
    // one ring of wall, one ring of margin
    let lo = lo.offset(-2, -2);
    let hi = hi.offset(2, 2);
    let mut out = refined.window(lo, (hi.x - lo.x + 1) as usize, (hi.y - lo.y + 1) as usize);
    // anything outside the source raster is exterior
    for c in out.cells_mut() {
        if *c == CellState::Unknown {
            *c = CellState::Obstacle;
        }
    }
    Ok(out)
}
