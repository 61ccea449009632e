use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use rand::RngCore;

use super::astar::{MOVES, SQRT_2};
use super::policy::{random_action, Policy, PolicyView};
use crate::env::Action;
use crate::gridmap::{normalize_angle, Cell, CellState, OccupancyGrid};

/// Give up on a frontier target after chasing it this many steps.
const PATIENCE: usize = 40;

/// Nearest-frontier explorer.
///
/// Plans over the known map with walls inflated by the robot radius, heads
/// for the closest Free cell bordering Unknown space (by path cost, ties to
/// the lowest cell index), and steers at a waypoint one forward step down
/// the path. Falls back to a random action when nothing is left to explore.
#[derive(Debug, Default, Clone)]
pub struct FrontierPolicy {
    target: Option<(i64, i64)>,
    chased: usize,
    abandoned: HashSet<(i64, i64)>,
}

#[derive(PartialEq)]
struct Node(f64, usize);

impl Eq for Node {}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Search {
    path: Vec<Cell>,
    /// Unknown cell next to the frontier, used when the robot already stands on it.
    unknown: Cell,
    target: Cell,
}

/// World-anchored key so abandoned targets survive map growth.
fn world_key(map: &OccupancyGrid, c: Cell) -> (i64, i64) {
    let (x, y) = map.cell_center(c);
    ((x / map.resolution()).floor() as i64, (y / map.resolution()).floor() as i64)
}

impl FrontierPolicy {
    fn unknown_neighbor(map: &OccupancyGrid, c: Cell) -> Option<Cell> {
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .map(|(dx, dy)| c.offset(dx, dy))
            .find(|n| map.get(*n) == Some(CellState::Unknown))
    }

    fn search(&self, map: &OccupancyGrid, start: Cell, clearance: Option<f64>) -> Option<Search> {
        let (w, h) = (map.width(), map.height());
        let res = map.resolution();
        // cells whose center is within `clearance` of an obstacle square are off limits
        let offsets: Vec<(i32, i32)> = match clearance {
            Some(c) => {
                let k = (c / res).ceil() as i32 + 1;
                let r = c / res;
                (-k..=k)
                    .flat_map(|dy| (-k..=k).map(move |dx| (dx, dy)))
                    .filter(|&(dx, dy)| {
                        let ex = (dx.abs() as f64 - 0.5).max(0.0);
                        let ey = (dy.abs() as f64 - 0.5).max(0.0);
                        ex * ex + ey * ey < r * r
                    })
                    .collect()
            }
            None => Vec::new(),
        };
        // 0 = not evaluated, 1 = passable, 2 = blocked
        let mut cache = vec![0u8; w * h];
        let mut passable = |c: Cell| -> bool {
            let Some(i) = map.index(c) else { return false };
            if c == start {
                return true;
            }
            if cache[i] == 0 {
                let ok = map.cells()[i] == CellState::Free
                    && offsets.iter().all(|&(dx, dy)| map.get(c.offset(dx, dy)) != Some(CellState::Obstacle));
                cache[i] = if ok { 1 } else { 2 };
            }
            cache[i] == 1
        };

        let index = |c: Cell| c.y as usize * w + c.x as usize;
        let mut dist = vec![f64::INFINITY; w * h];
        let mut parent = vec![usize::MAX; w * h];
        let mut heap = BinaryHeap::new();
        let s = index(start);
        dist[s] = 0.0;
        heap.push(Reverse(Node(0.0, s)));
        while let Some(Reverse(Node(d, i))) = heap.pop() {
            if d > dist[i] {
                continue;
            }
            let cell = Cell::new((i % w) as i32, (i / w) as i32);
            if let Some(unknown) = Self::unknown_neighbor(map, cell) {
                if !self.abandoned.contains(&world_key(map, cell)) && (cell != start || passable(cell)) {
                    let mut path = vec![cell];
                    let mut k = i;
                    while parent[k] != usize::MAX {
                        k = parent[k];
                        path.push(Cell::new((k % w) as i32, (k / w) as i32));
                    }
                    path.reverse();
                    return Some(Search { path, unknown, target: cell });
                }
            }
            let mut ok = [false; 8];
            for (k, (dx, dy)) in MOVES.into_iter().enumerate() {
                ok[k] = passable(cell.offset(dx, dy))
                    && (dx == 0 || dy == 0 || (passable(cell.offset(dx, 0)) && passable(cell.offset(0, dy))));
            }
            for (k, (dx, dy)) in MOVES.into_iter().enumerate() {
                if !ok[k] {
                    continue;
                }
                let j = index(cell.offset(dx, dy));
                let nd = d + if dx != 0 && dy != 0 { SQRT_2 } else { 1.0 };
                if nd < dist[j] {
                    dist[j] = nd;
                    parent[j] = i;
                    heap.push(Reverse(Node(nd, j)));
                }
            }
        }
        None
    }
}

impl Policy for FrontierPolicy {
    fn name(&self) -> &'static str {
        "frontier"
    }

    fn reset(&mut self) {
        *self = Self::default();
    }

    fn act(&mut self, view: &PolicyView<'_>, rng: &mut dyn RngCore) -> Action {
        let map = view.map;
        let pose = view.pose;
        if view.last_collision {
            return random_action(rng);
        }
        let start = map.world_to_cell(pose.x, pose.y);
        if !map.contains(start) {
            return random_action(rng);
        }
        let res = map.resolution();
        let found =
            self.search(map, start, Some(view.robot.radius + 0.5 * res)).or_else(|| self.search(map, start, None));
        let Some(found) = found else {
            self.target = None;
            return random_action(rng);
        };

        let key = world_key(map, found.target);
        if self.target == Some(key) {
            self.chased += 1;
            if self.chased > PATIENCE {
                self.abandoned.insert(key);
                self.target = None;
                self.chased = 0;
            }
        } else {
            self.target = Some(key);
            self.chased = 0;
        }

        let lookahead = ((view.robot.linear_step / res).round() as usize).max(1);
        let waypoint =
            if found.path.len() == 1 { found.unknown } else { found.path[lookahead.min(found.path.len() - 1)] };
        let (wx, wy) = map.cell_center(waypoint);
        let error = normalize_angle((wy - pose.y).atan2(wx - pose.x) - pose.theta);
        let half_turn = 0.5 * view.robot.angular_step.to_radians();
        let turn = if error >= 0.0 { Action::RotateLeft } else { Action::RotateRight };
        if error.abs() >= half_turn {
            return turn;
        }
        let ahead = pose.advanced(view.robot.linear_step);
        if map.disc_hits_obstacle(ahead.x, ahead.y, view.robot.radius) {
            return turn;
        }
        Action::Forward
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::RobotSpec;
    use crate::gridmap::Pose;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn act(map: &OccupancyGrid, pose: Pose) -> Action {
        let robot = RobotSpec::default();
        let view = PolicyView { map, pose, robot: &robot, last_collision: false };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        FrontierPolicy::default().act(&view, &mut rng)
    }

    /// 40x40 known free room whose row `y >= split` is still Unknown.
    fn half_known(split: i32, unknown_west: bool) -> OccupancyGrid {
        let mut g = OccupancyGrid::filled(40, 40, 0.1, (0.0, 0.0), CellState::Free).unwrap();
        for i in 0..g.len() {
            let c = g.cell_at_index(i);
            let unknown = if unknown_west { c.x < split } else { c.y >= split };
            if unknown {
                g.cells_mut()[i] = CellState::Unknown;
            }
        }
        g
    }

    #[test]
    fn frontier_ahead_means_forward() {
        let map = half_known(30, false);
        assert_eq!(act(&map, Pose::new(2.05, 1.05, std::f64::consts::FRAC_PI_2)), Action::Forward);
    }

    #[test]
    fn frontier_to_the_left_means_turn_left() {
        // robot faces north, unknown space lies to the west
        let map = half_known(10, true);
        assert_eq!(act(&map, Pose::new(2.05, 2.05, std::f64::consts::FRAC_PI_2)), Action::RotateLeft);
        // facing south, the same frontier is to the right
        assert_eq!(act(&map, Pose::new(2.05, 2.05, -std::f64::consts::FRAC_PI_2)), Action::RotateRight);
    }

    #[test]
    fn explored_map_falls_back_to_random() {
        let map = OccupancyGrid::filled(20, 20, 0.1, (0.0, 0.0), CellState::Free).unwrap();
        let robot = RobotSpec::default();
        let view = PolicyView { map: &map, pose: Pose::new(1.0, 1.0, 0.0), robot: &robot, last_collision: false };
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        let mut policy = FrontierPolicy::default();
        for _ in 0..20 {
            assert_eq!(policy.act(&view, &mut a), random_action(&mut b));
        }
    }

    #[test]
    fn does_not_drive_into_known_walls() {
        let mut map = half_known(30, false);
        for x in 0..40 {
            map.set(Cell::new(x, 12), CellState::Obstacle);
        }
        map.set(Cell::new(5, 12), CellState::Free);
        // facing the wall, frontier only reachable around it: never Forward into the wall
        let a = act(&map, Pose::new(2.05, 1.0, std::f64::consts::FRAC_PI_2));
        assert_ne!(a, Action::Forward);
    }
}
