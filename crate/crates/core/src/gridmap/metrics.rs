use super::{CellState, GridError, OccupancyGrid};

fn iou_of(a: &OccupancyGrid, b: &OccupancyGrid, state: CellState) -> Result<f64, GridError> {
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(GridError::DimensionMismatch { a: (a.width(), a.height()), b: (b.width(), b.height()) });
    }
    let (mut inter, mut union) = (0usize, 0usize);
    for (&x, &y) in a.cells().iter().zip(b.cells()) {
        let (in_a, in_b) = (x == state, y == state);
        inter += (in_a && in_b) as usize;
        union += (in_a || in_b) as usize;
    }
    Ok(if union == 0 { 1.0 } else { inter as f64 / union as f64 })
}

/// Intersection-over-union of the Free cell sets; 1.0 when both are empty.
pub fn iou_free(a: &OccupancyGrid, b: &OccupancyGrid) -> Result<f64, GridError> {
    iou_of(a, b, CellState::Free)
}

/// Intersection-over-union of the Obstacle cell sets.
pub fn iou_obstacle(a: &OccupancyGrid, b: &OccupancyGrid) -> Result<f64, GridError> {
    iou_of(a, b, CellState::Obstacle)
}

/// `reference` with every cell that is Unknown in `observed` set to Unknown.
pub fn restrict_to_observed(reference: &OccupancyGrid, observed: &OccupancyGrid) -> Result<OccupancyGrid, GridError> {
    if (reference.width(), reference.height()) != (observed.width(), observed.height()) {
        return Err(GridError::DimensionMismatch {
            a: (reference.width(), reference.height()),
            b: (observed.width(), observed.height()),
        });
    }
    let cells = reference
        .cells()
        .iter()
        .zip(observed.cells())
        .map(|(&r, &o)| if o.is_known() { r } else { CellState::Unknown })
        .collect();
    reference.with_cells(cells)
}
