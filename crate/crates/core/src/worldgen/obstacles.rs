use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::WorldgenError;
use crate::gridmap::{Cell, CellState, OccupancyGrid, Pose};

const PLACEMENT_ATTEMPTS: usize = 1000;

/// How many obstacles to place: a fixed number or uniform in `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CountRepr", into = "CountRepr")]
pub enum ObstacleCount {
    Fixed(usize),
    Uniform { lo: usize, hi: usize },
}

impl Default for ObstacleCount {
    fn default() -> Self {
        ObstacleCount::Fixed(0)
    }
}

impl ObstacleCount {
    pub fn sample(self, rng: &mut impl Rng) -> usize {
        match self {
            ObstacleCount::Fixed(n) => n,
            ObstacleCount::Uniform { lo, hi } => rng.random_range(lo..=hi),
        }
    }
}

impl fmt::Display for ObstacleCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObstacleCount::Fixed(n) => write!(f, "{n}"),
            ObstacleCount::Uniform { lo, hi } => write!(f, "random({lo}..{hi})"),
        }
    }
}

impl FromStr for ObstacleCount {
    type Err = WorldgenError;

    /// Accepts `"3"` or `"random(1..5)"` (inclusive bounds).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WorldgenError::InvalidObstacleSpec(format!("count {s:?}: expected N or \"random(lo..hi)\""));
        let s = s.trim();
        if let Ok(n) = s.parse() {
            return Ok(ObstacleCount::Fixed(n));
        }
        let inner = s.strip_prefix("random(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (lo, hi) = inner.split_once("..").ok_or_else(bad)?;
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let (lo, hi): (usize, usize) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
        if lo > hi {
            return Err(bad());
        }
        Ok(ObstacleCount::Uniform { lo, hi })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CountRepr {
    Number(usize),
    Text(String),
}

impl TryFrom<CountRepr> for ObstacleCount {
    type Error = WorldgenError;

    fn try_from(r: CountRepr) -> Result<Self, Self::Error> {
        match r {
            CountRepr::Number(n) => Ok(ObstacleCount::Fixed(n)),
            CountRepr::Text(s) => s.parse(),
        }
    }
}

impl From<ObstacleCount> for CountRepr {
    fn from(c: ObstacleCount) -> Self {
        match c {
            ObstacleCount::Fixed(n) => CountRepr::Number(n),
            other => CountRepr::Text(other.to_string()),
        }
    }
}

/// Obstacle footprint in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeSpec {
    Rectangle { width: f64, height: f64 },
    Circle { radius: f64 },
}

impl ShapeSpec {
    fn validate(&self) -> Result<(), WorldgenError> {
        let ok = match *self {
            ShapeSpec::Rectangle { width, height } => {
                width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()
            }
            ShapeSpec::Circle { radius } => radius > 0.0 && radius.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(WorldgenError::InvalidObstacleSpec(format!("shape dimensions must be positive: {self:?}")))
        }
    }

    fn contains(&self, pose: Pose, x: f64, y: f64) -> bool {
        let (dx, dy) = (x - pose.x, y - pose.y);
        match *self {
            ShapeSpec::Circle { radius } => dx * dx + dy * dy <= radius * radius,
            ShapeSpec::Rectangle { width, height } => {
                let (s, c) = pose.theta.sin_cos();
                let (u, v) = (c * dx + s * dy, -s * dx + c * dy);
                u.abs() <= width / 2.0 && v.abs() <= height / 2.0
            }
        }
    }

    fn bounding_radius(&self) -> f64 {
        match *self {
            ShapeSpec::Circle { radius } => radius,
            ShapeSpec::Rectangle { width, height } => 0.5 * width.hypot(height),
        }
    }

    /// Cells of `grid`'s lattice whose centers fall inside the shape at
    /// `pose`; never empty (falls back to the cell under `pose`).
    pub fn footprint(&self, grid: &OccupancyGrid, pose: Pose) -> Vec<Cell> {
        let r = self.bounding_radius();
        let lo = grid.world_to_cell(pose.x - r, pose.y - r);
        let hi = grid.world_to_cell(pose.x + r, pose.y + r);
        let mut cells = Vec::new();
        for y in lo.y..=hi.y {
            for x in lo.x..=hi.x {
                let (cx, cy) = grid.cell_center(Cell::new(x, y));
                if self.contains(pose, cx, cy) {
                    cells.push(Cell::new(x, y));
                }
            }
        }
        if cells.is_empty() {
            cells.push(grid.world_to_cell(pose.x, pose.y));
        }
        cells
    }
}

/// Where obstacles go.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    #[default]
    Random,
    Given(Vec<Pose>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ObstacleSpec {
    pub count: ObstacleCount,
    /// Shape pool: random placement draws uniformly from it; given placements
    /// cycle through it.
    pub shapes: Vec<ShapeSpec>,
    pub placement: Placement,
    /// Per-step poses; obstacle `i` is dynamic when `trajectories[i]` exists.
    pub trajectories: Vec<Vec<Pose>>,
}

impl Default for ObstacleSpec {
    fn default() -> Self {
        Self {
            count: ObstacleCount::Fixed(0),
            shapes: vec![ShapeSpec::Rectangle { width: 0.5, height: 0.5 }, ShapeSpec::Circle { radius: 0.25 }],
            placement: Placement::Random,
            trajectories: Vec::new(),
        }
    }
}

impl ObstacleSpec {
    pub fn validate(&self) -> Result<(), WorldgenError> {
        if self.shapes.is_empty() && self.count != ObstacleCount::Fixed(0) {
            return Err(WorldgenError::InvalidObstacleSpec("no shapes to draw from".into()));
        }
        for s in &self.shapes {
            s.validate()?;
        }
        if let Some(i) = self.trajectories.iter().position(|t| t.is_empty()) {
            return Err(WorldgenError::InvalidObstacleSpec(format!("trajectory {i} is empty")));
        }
        Ok(())
    }
}

/// A placed obstacle and the cells it currently covers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlacedObstacle {
    pub shape: ShapeSpec,
    pub pose: Pose,
    /// Empty for static obstacles.
    pub trajectory: Vec<Pose>,
    pub cells: Vec<Cell>,
}

impl PlacedObstacle {
    pub fn is_dynamic(&self) -> bool {
        !self.trajectory.is_empty()
    }
}

/// Obstacles on top of a wall-only base map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstacleSet {
    pub obstacles: Vec<PlacedObstacle>,
}

impl ObstacleSet {
    pub fn is_empty(&self) -> bool {
        self.obstacles.is_empty()
    }

    pub fn has_dynamic(&self) -> bool {
        self.obstacles.iter().any(PlacedObstacle::is_dynamic)
    }

    /// `base` with every obstacle stamped as Obstacle.
    pub fn stamp(&self, base: &OccupancyGrid) -> OccupancyGrid {
        let mut out = base.clone();
        for o in &self.obstacles {
            for &c in &o.cells {
                out.set(c, CellState::Obstacle);
            }
        }
        out
    }

    /// Move dynamic obstacles to `trajectory[step % len]`. An obstacle whose
    /// new cells `allow` rejects stays where it is.
    pub fn advance_with(&mut self, base: &OccupancyGrid, step: usize, allow: impl Fn(&[Cell]) -> bool) {
        for o in self.obstacles.iter_mut().filter(|o| o.is_dynamic()) {
            let pose = o.trajectory[step % o.trajectory.len()];
            let cells = o.shape.footprint(base, pose);
            if allow(&cells) {
                o.pose = pose;
                o.cells = cells;
            }
        }
    }
}

/// Re-stamp dynamic obstacles at `trajectory[step % len]`; static ones stay.
pub fn advance_obstacles(set: &ObstacleSet, base: &OccupancyGrid, step: usize) -> (ObstacleSet, OccupancyGrid) {
    let mut next = set.clone();
    next.advance_with(base, step, |_| true);
    let stamped = next.stamp(base);
    (next, stamped)
}

/// Cells touched by a robot disc at `pose`.
fn robot_footprint(grid: &OccupancyGrid, pose: Pose, radius: f64) -> Vec<Cell> {
    let mut cells = Vec::new();
    let lo = grid.world_to_cell(pose.x - radius, pose.y - radius);
    let hi = grid.world_to_cell(pose.x + radius, pose.y + radius);
    let (gx, gy) = grid.world_to_grid(pose.x, pose.y);
    let r = radius / grid.resolution();
    for y in lo.y..=hi.y {
        for x in lo.x..=hi.x {
            let dx = (x as f64 - gx).max(0.0).max(gx - (x + 1) as f64);
            let dy = (y as f64 - gy).max(0.0).max(gy - (y + 1) as f64);
            if dx * dx + dy * dy <= r * r {
                cells.push(Cell::new(x, y));
            }
        }
    }
    cells
}

/// Place obstacles on `ground_truth` without touching walls, each other, or
/// the robot disc (when given). Returns the stamped map and the placements.
pub fn generate_obstacles(
    ground_truth: &OccupancyGrid,
    spec: &ObstacleSpec,
    robot: Option<(Pose, f64)>,
    rng: &mut impl Rng,
) -> Result<(OccupancyGrid, ObstacleSet), WorldgenError> {
    spec.validate()?;
    let mut count = spec.count.sample(rng);
    if let Placement::Given(poses) = &spec.placement {
        if spec.count == ObstacleCount::Fixed(0) || count > poses.len() {
            count = poses.len();
        }
    }
    // every trajectory needs an obstacle to carry it
    count = count.max(spec.trajectories.len());
    let robot_cells = robot.map(|(p, r)| robot_footprint(ground_truth, p, r)).unwrap_or_default();

    let mut stamped = ground_truth.clone();
    let mut set = ObstacleSet { obstacles: Vec::new() };
    let free_cells: Vec<usize> = (0..stamped.len()).filter(|&i| stamped.cells()[i] == CellState::Free).collect();

    let check = |stamped: &OccupancyGrid, cells: &[Cell]| -> Result<(), &'static str> {
        for c in cells {
            match (ground_truth.get(*c), stamped.get(*c)) {
                (None, _) | (Some(CellState::Obstacle | CellState::Unknown), _) => return Err("a wall"),
                (_, Some(CellState::Obstacle)) => return Err("another obstacle"),
                _ => {}
            }
            if robot_cells.contains(c) {
                return Err("the robot");
            }
        }
        Ok(())
    };

    for index in 0..count {
        let trajectory = spec.trajectories.get(index).cloned().unwrap_or_default();
        let (shape, cells, pose) = match (&spec.placement, trajectory.first()) {
            (_, Some(&start)) => {
                let shape = spec.shapes[index % spec.shapes.len()];
                let cells = shape.footprint(ground_truth, start);
                check(&stamped, &cells).map_err(|what| WorldgenError::PlacementOverlap { index, what })?;
                (shape, cells, start)
            }
            (Placement::Given(poses), None) => {
                let shape = spec.shapes[index % spec.shapes.len()];
                let cells = shape.footprint(ground_truth, poses[index]);
                check(&stamped, &cells).map_err(|what| WorldgenError::PlacementOverlap { index, what })?;
                (shape, cells, poses[index])
            }
            (Placement::Random, None) => {
                if free_cells.is_empty() {
                    return Err(WorldgenError::PlacementFailed { index, attempts: 0 });
                }
                let shape = spec.shapes[rng.random_range(0..spec.shapes.len())];
                let mut found = None;
                for _ in 0..PLACEMENT_ATTEMPTS {
                    let anchor = ground_truth.cell_at_index(free_cells[rng.random_range(0..free_cells.len())]);
                    let (cx, cy) = ground_truth.cell_center(anchor);
                    let res = ground_truth.resolution();
                    let jitter = (rng.random_range(-0.5..0.5) * res, rng.random_range(-0.5..0.5) * res);
                    let pose = Pose::new(cx + jitter.0, cy + jitter.1, rng.random_range(0.0..std::f64::consts::PI));
                    let cells = shape.footprint(ground_truth, pose);
                    if check(&stamped, &cells).is_ok() {
                        found = Some((cells, pose));
                        break;
                    }
                }
                let (cells, pose) =
                    found.ok_or(WorldgenError::PlacementFailed { index, attempts: PLACEMENT_ATTEMPTS })?;
                (shape, cells, pose)
            }
        };
        for (step, p) in trajectory.iter().enumerate() {
            let cells = shape.footprint(ground_truth, *p);
            if cells.iter().any(|c| ground_truth.get(*c) != Some(CellState::Free)) {
                return Err(WorldgenError::TrajectoryCollision { index, step });
            }
        }
        for &c in &cells {
            stamped.set(c, CellState::Obstacle);
        }
        set.obstacles.push(PlacedObstacle { shape, pose, trajectory, cells });
    }
    Ok((stamped, set))
}
