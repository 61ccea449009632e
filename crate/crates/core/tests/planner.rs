mod common;

use common::{random_grid, ucs_cost, walk_cost};
use gridslam::gridmap::{CellState, OccupancyGrid};
use gridslam::planner::astar;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_free_cell(g: &OccupancyGrid, rng: &mut ChaCha8Rng) -> gridslam::gridmap::Cell {
    use rand::Rng;
    loop {
        let i = rng.random_range(0..g.len());
        if g.cells()[i] == CellState::Free {
            return g.cell_at_index(i);
        }
    }
}

#[test]
fn astar_matches_uniform_cost_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut reachable, mut unreachable) = (0, 0);
    for _ in 0..50 {
        let g = random_grid(20, 20, 0.3, &mut rng);
        for _ in 0..10 {
            let (s, t) = (random_free_cell(&g, &mut rng), random_free_cell(&g, &mut rng));
            let path = astar(&g, s, t).unwrap();
            match ucs_cost(&g, s, t) {
                Some(expected) => {
                    reachable += 1;
                    assert_eq!(path.cells.first(), Some(&s));
                    assert_eq!(path.cells.last(), Some(&t));
                    let walked = walk_cost(&g, &path.cells);
                    assert!((walked - path.cost).abs() < 1e-9);
                    assert!((path.cost - expected).abs() < 1e-9, "{s} -> {t}: {} vs {expected}", path.cost);
                }
                None => {
                    unreachable += 1;
                    assert!(path.is_empty());
                }
            }
        }
    }
    assert!(reachable > 100 && unreachable > 0, "{reachable} / {unreachable}");
}

#[test]
fn astar_rejects_blocked_endpoints() {
    let g = OccupancyGrid::from_ascii(&["...", ".#.", "..."], 0.1).unwrap();
    let c = gridslam::gridmap::Cell::new(1, 1);
    assert!(astar(&g, c, gridslam::gridmap::Cell::new(0, 0)).is_err());
}
