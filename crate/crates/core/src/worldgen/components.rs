use rand::Rng;

use super::WorldgenError;
use crate::gridmap::{Cell, CellState, OccupancyGrid};

/// 4-connected labelling of the Free cells.
#[derive(Debug, Clone)]
pub struct Components {
    /// Component id per cell, `NONE` for non-Free cells.
    pub labels: Vec<u32>,
    /// Cell count per component id.
    pub sizes: Vec<usize>,
}

impl Components {
    pub const NONE: u32 = u32::MAX;

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn label(&self, grid: &OccupancyGrid, cell: Cell) -> Option<u32> {
        grid.index(cell).map(|i| self.labels[i]).filter(|&l| l != Self::NONE)
    }
}

/// Label Free components by 4-connected flood fill, in row-major seed order.
pub fn free_components(grid: &OccupancyGrid) -> Components {
    let (w, h) = (grid.width(), grid.height());
    let cells = grid.cells();
    let mut labels = vec![Components::NONE; cells.len()];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for seed in 0..cells.len() {
        if cells[seed] != CellState::Free || labels[seed] != Components::NONE {
            continue;
        }
        let id = sizes.len() as u32;
        let mut size = 0;
        labels[seed] = id;
        stack.push(seed);
        while let Some(i) = stack.pop() {
            size += 1;
            let (x, y) = (i % w, i / w);
            let mut push = |j: usize| {
                if cells[j] == CellState::Free && labels[j] == Components::NONE {
                    labels[j] = id;
                    stack.push(j);
                }
            };
            if x > 0 {
                push(i - 1);
            }
            if x + 1 < w {
                push(i + 1);
            }
            if y > 0 {
                push(i - w);
            }
            if y + 1 < h {
                push(i + w);
            }
        }
        sizes.push(size);
    }
    Components { labels, sizes }
}

/// Turn every Free component smaller than `area` (m²) into Obstacle.
pub fn fill_small_cells(grid: &OccupancyGrid, area: f64) -> Result<OccupancyGrid, WorldgenError> {
    if !(area > 0.0 && area.is_finite()) {
        return Err(WorldgenError::InvalidParameter { name: "fill area", expect: "positive", value: area });
    }
    let comps = free_components(grid);
    let cell_area = grid.resolution() * grid.resolution();
    let small: Vec<bool> = comps.sizes.iter().map(|&n| (n as f64) * cell_area < area).collect();
    let mut out = grid.clone();
    for (cell, &label) in out.cells_mut().iter_mut().zip(&comps.labels) {
        if label != Components::NONE && small[label as usize] {
            *cell = CellState::Obstacle;
        }
    }
    Ok(out)
}

/// `m` distinct Free cells drawn uniformly without replacement.
pub fn sample_free_points(grid: &OccupancyGrid, m: usize, rng: &mut impl Rng) -> Result<Vec<Cell>, WorldgenError> {
    let free: Vec<usize> = (0..grid.len()).filter(|&i| grid.cells()[i] == CellState::Free).collect();
    if free.len() < m {
        return Err(WorldgenError::NotEnoughFree { requested: m, available: free.len() });
    }
    Ok(rand::seq::index::sample(rng, free.len(), m).into_iter().map(|k| grid.cell_at_index(free[k])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Field of `w`x`h` cells at 0.1 m with walls drawn by `wall`.
    fn field(w: usize, h: usize, wall: impl Fn(i32, i32) -> bool) -> OccupancyGrid {
        let mut g = OccupancyGrid::filled(w, h, 0.1, (0.0, 0.0), CellState::Free).unwrap();
        for i in 0..g.len() {
            let c = g.cell_at_index(i);
            let border = c.x == 0 || c.y == 0 || c.x == w as i32 - 1 || c.y == h as i32 - 1;
            if border || wall(c.x, c.y) {
                g.cells_mut()[i] = CellState::Obstacle;
            }
        }
        g
    }

    #[test]
    fn one_square_meter_pocket_is_filled() {
        // 10x10 pocket at x 1..=10, main hall beyond x = 11
        let g = field(60, 40, |x, y| (x == 11 && y <= 11) || (y == 11 && x <= 11));
        let out = fill_small_cells(&g, 2.0).unwrap();
        assert_eq!(out.get(Cell::new(5, 5)), Some(CellState::Obstacle));
        assert_eq!(out.get(Cell::new(30, 30)), Some(CellState::Free));
        assert_eq!(out.count(CellState::Free), g.count(CellState::Free) - 100);
    }

    #[test]
    fn large_region_unchanged() {
        let g = field(102, 102, |_, _| false);
        assert_eq!(fill_small_cells(&g, 2.0).unwrap(), g);
    }

    #[test]
    fn threshold_is_strict_on_both_sides() {
        // pockets of 190 and 210 cells (1.9 and 2.1 m²), each 10 rows tall
        let g = field(80, 30, |x, y| x == 20 || x == 42 || y == 11);
        let comps = free_components(&g);
        let mut sizes = comps.sizes.clone();
        sizes.sort();
        assert_eq!(&sizes[..2], &[190, 210]);
        let out = fill_small_cells(&g, 2.0).unwrap();
        assert_eq!(out.get(Cell::new(10, 5)), Some(CellState::Obstacle));
        assert_eq!(out.get(Cell::new(30, 5)), Some(CellState::Free));
    }

    #[test]
    fn sampling_whole_free_set() {
        let g = field(6, 5, |_, _| false);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut pts = sample_free_points(&g, 12, &mut rng).unwrap();
        pts.sort();
        let mut all: Vec<Cell> =
            (0..g.len()).filter(|&i| g.cells()[i] == CellState::Free).map(|i| g.cell_at_index(i)).collect();
        all.sort();
        assert_eq!(pts, all);
        assert!(sample_free_points(&g, 13, &mut rng).is_err());
    }

    #[test]
    fn sampling_is_uniform() {
        let g = field(12, 12, |_, _| false); // 100 free cells
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut hits = vec![0usize; g.len()];
        let reps = 10_000;
        for _ in 0..reps {
            for c in sample_free_points(&g, 10, &mut rng).unwrap() {
                hits[g.index(c).unwrap()] += 1;
            }
        }
        for (i, &n) in hits.iter().enumerate() {
            if g.cells()[i] == CellState::Free {
                let f = n as f64 / reps as f64;
                assert!((f - 0.1).abs() < 0.01, "cell {i}: {f}");
            } else {
                assert_eq!(n, 0);
            }
        }
    }
}
