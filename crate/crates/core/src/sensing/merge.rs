use super::{SectorScan, SensingError};
use crate::gridmap::{Cell, CellState, OccupancyGrid};

/// Overwrite `map` with every known cell of `sector` (last write wins),
/// growing the map when the sector reaches past its edges. Returns the
/// number of cells that were Unknown in `map` before the merge.
pub fn merge_into(map: &mut OccupancyGrid, sector: &SectorScan) -> Result<usize, SensingError> {
    let grid = &sector.grid;
    let (mut ox, mut oy) = map.lattice_offset(grid).ok_or(SensingError::LatticeMismatch)?;

    let w = grid.width();
    let (mut lo, mut hi) = (Cell::new(i32::MAX, i32::MAX), Cell::new(i32::MIN, i32::MIN));
    for (i, s) in grid.cells().iter().enumerate() {
        if s.is_known() {
            let (x, y) = ((i % w) as i32, (i / w) as i32);
            lo = Cell::new(lo.x.min(x), lo.y.min(y));
            hi = Cell::new(hi.x.max(x), hi.y.max(y));
        }
    }
    if lo.x > hi.x {
        return Ok(0);
    }
    let (sx, sy) = map.grow_to_include(lo.offset(ox, oy), hi.offset(ox, oy));
    ox += sx;
    oy += sy;

    let mut fresh = 0;
    let map_w = map.width();
    let cells = map.cells_mut();
    for y in lo.y..=hi.y {
        let row = &grid.cells()[y as usize * w..(y as usize + 1) * w];
        let dst = (y + oy) as usize * map_w;
        for x in lo.x..=hi.x {
            let s = row[x as usize];
            if s.is_known() {
                let target = &mut cells[dst + (x + ox) as usize];
                if *target == CellState::Unknown {
                    fresh += 1;
                }
                *target = s;
            }
        }
    }
    Ok(fresh)
}

/// Functional form of [`merge_into`].
pub fn merge(map: &OccupancyGrid, sector: &SectorScan) -> Result<OccupancyGrid, SensingError> {
    let mut out = map.clone();
    merge_into(&mut out, sector)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridmap::Pose;
    use crate::sensing::{scan, SensorSpec};

    fn world() -> OccupancyGrid {
        let rows = ["##########", "#........#", "#..##....#", "#........#", "#.....#..#", "#........#", "##########"];
        OccupancyGrid::from_ascii(&rows, 0.1).unwrap()
    }

    fn sensor() -> SensorSpec {
        SensorSpec { range: 0.5, fov: 360.0, angular_step: None }
    }

    fn unknown_like(g: &OccupancyGrid) -> OccupancyGrid {
        OccupancyGrid::filled(g.width(), g.height(), g.resolution(), g.origin(), CellState::Unknown).unwrap()
    }

    #[test]
    fn merge_into_unknown_copies_sector() {
        let g = world();
        let s = scan(&g, Pose::new(0.25, 0.25, 0.0), &sensor()).unwrap();
        let m = merge(&unknown_like(&g), &s).unwrap();
        for y in 0..g.height() as i32 {
            for x in 0..g.width() as i32 {
                let c = Cell::new(x, y);
                assert_eq!(m.get(c).unwrap(), s.grid.get_or_unknown(s.local(c)));
            }
        }
    }

    #[test]
    fn unknown_sector_is_identity() {
        let g = world();
        let mut s = scan(&g, Pose::new(0.25, 0.25, 0.0), &sensor()).unwrap();
        s.grid.fill(CellState::Unknown);
        assert_eq!(merge(&g, &s).unwrap(), g);
    }

    #[test]
    fn last_write_wins() {
        let g = world();
        let first = scan(&g, Pose::new(0.25, 0.25, 0.0), &sensor()).unwrap();
        let m = merge(&unknown_like(&g), &first).unwrap();
        assert_eq!(m.get(Cell::new(2, 2)), Some(CellState::Free));
        let mut second = first.clone();
        let local = second.local(Cell::new(2, 2));
        second.grid.set(local, CellState::Obstacle);
        let m = merge(&m, &second).unwrap();
        assert_eq!(m.get(Cell::new(2, 2)), Some(CellState::Obstacle));
    }

    #[test]
    fn merge_is_idempotent_and_counts_fresh_cells() {
        let g = world();
        let s = scan(&g, Pose::new(0.55, 0.35, 1.0), &sensor()).unwrap();
        let mut m = unknown_like(&g);
        let fresh = merge_into(&mut m, &s).unwrap();
        assert_eq!(fresh, m.known_count());
        let before = m.clone();
        assert_eq!(merge_into(&mut m, &s).unwrap(), 0);
        assert_eq!(m, before);
    }

    #[test]
    fn grows_map_when_sector_overhangs() {
        let g = world();
        let s = scan(&g, Pose::new(0.25, 0.25, 0.0), &sensor()).unwrap();
        let small = g.window(Cell::new(2, 2), 4, 4);
        let small = unknown_like(&small);
        let m = merge(&small, &s).unwrap();
        assert!(m.width() > 4 && m.height() > 4);
        // the grown map still sits on the same lattice
        let (dx, dy) = g.lattice_offset(&m).unwrap();
        for y in 0..m.height() as i32 {
            for x in 0..m.width() as i32 {
                let gc = Cell::new(x + dx, y + dy);
                assert_eq!(m.get(Cell::new(x, y)).unwrap(), s.grid.get_or_unknown(s.local(gc)));
            }
        }
    }

    #[test]
    fn mismatched_lattice_rejected() {
        let g = world();
        let s = scan(&g, Pose::new(0.25, 0.25, 0.0), &sensor()).unwrap();
        let off = OccupancyGrid::filled(5, 5, 0.1, (0.05, 0.0), CellState::Unknown).unwrap();
        assert!(merge(&off, &s).is_err());
    }
}
