use super::{Cell, CellState, GridError, OccupancyGrid, Pose};

/// Egocentric square crop of `map` around `pose`.
///
/// The crop has `round(side / resolution)` cells per side and is expressed in
/// the robot frame: its +x axis is the robot heading and the robot cell sits
/// at index `n / 2` on both axes. Samples are nearest-neighbour, pivoting on
/// the center of the cell that contains the robot; samples that fall outside
/// `map` are Unknown.
pub fn crop_local(map: &OccupancyGrid, pose: Pose, side: f64) -> Result<OccupancyGrid, GridError> {
    if !(side > 0.0 && side.is_finite()) {
        return Err(GridError::InvalidSide(side));
    }
    let res = map.resolution();
    let n = ((side / res).round() as usize).max(1);
    let half = (n / 2) as f64;
    let robot = map.world_to_cell(pose.x, pose.y);
    let (pivot_x, pivot_y) = (robot.x as f64 + 0.5, robot.y as f64 + 0.5);
    let (sin, cos) = if pose.theta == 0.0 { (0.0, 1.0) } else { pose.theta.sin_cos() };

    let mut cells = vec![CellState::Unknown; n * n];
    for j in 0..n {
        let v = j as f64 - half;
        for i in 0..n {
            let u = i as f64 - half;
            let gx = pivot_x + cos * u - sin * v;
            let gy = pivot_y + sin * u + cos * v;
            cells[j * n + i] = map.get_or_unknown(Cell::new(gx.floor() as i32, gy.floor() as i32));
        }
    }
    let corner = -(half + 0.5) * res;
    OccupancyGrid::from_cells(n, n, res, (corner, corner), cells)
}
