use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{ray, RayEnd, SectorScan, SensingError};
use crate::gridmap::{Cell, CellState, OccupancyGrid};

/// Standard deviations of the two noise stages. All zero = noiseless.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSpec {
    /// Range error, in cells.
    pub range_sigma: f64,
    /// Registration rotation error, radians.
    pub reg_theta_sigma: f64,
    /// Registration translation error per axis, meters.
    pub reg_xy_sigma: f64,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<(), SensingError> {
        for (name, v) in [
            ("range_sigma", self.range_sigma),
            ("reg_theta_sigma", self.reg_theta_sigma),
            ("reg_xy_sigma", self.reg_xy_sigma),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(SensingError::InvalidNoise(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.range_sigma == 0.0 && self.reg_theta_sigma == 0.0 && self.reg_xy_sigma == 0.0
    }
}

/// One draw of the per-scan registration error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RegistrationError {
    pub theta: f64,
    pub dx: f64,
    pub dy: f64,
}

fn normal(sigma: f64) -> Normal<f64> {
    Normal::new(0.0, sigma).expect("sigma validated as finite and non-negative")
}

/// Integer range shift in cells: a rounded Gaussian draw.
pub fn sample_range_shift(sigma: f64, rng: &mut impl Rng) -> i64 {
    if sigma == 0.0 {
        return 0;
    }
    normal(sigma).sample(rng).round() as i64
}

/// Draw (theta, dx, dy) in that order.
pub fn sample_registration(noise: &NoiseSpec, rng: &mut impl Rng) -> RegistrationError {
    let mut draw = |sigma: f64| if sigma == 0.0 { 0.0 } else { normal(sigma).sample(rng) };
    let theta = draw(noise.reg_theta_sigma);
    let dx = draw(noise.reg_xy_sigma);
    let dy = draw(noise.reg_xy_sigma);
    RegistrationError { theta, dx, dy }
}

/// Slide every obstacle return along its ray by a rounded Gaussian number of
/// cells, clamped to [1 cell, max range], and redraw the sector.
///
/// One shift is drawn per distinct obstacle cell (in cell order), shared by
/// every ray that ended on it.
pub fn perturb_ranges(sector: &SectorScan, noise: &NoiseSpec, rng: &mut impl Rng) -> SectorScan {
    if noise.range_sigma == 0.0 {
        return sector.clone();
    }
    let mut shifts: BTreeMap<Cell, i64> = sector.rays.iter().filter(|r| r.hit).map(|r| (r.cell, 0)).collect();
    for shift in shifts.values_mut() {
        *shift = sample_range_shift(noise.range_sigma, rng);
    }
    if shifts.values().all(|&s| s == 0) {
        return sector.clone();
    }

    let mut out = sector.clone();
    let max_t = sector.range_cells;
    for end in out.rays.iter_mut().filter(|r| r.hit) {
        let shift = shifts[&end.cell];
        if shift != 0 {
            *end = shifted_end(sector.start, end, shift, max_t);
        }
    }
    out.rerender();
    out
}

/// Move `end` by `shift` cells along its own traversal, never onto the
/// robot cell and never past max range.
fn shifted_end(start: (f64, f64), end: &RayEnd, shift: i64, max_t: f64) -> RayEnd {
    let dir = (end.angle.cos(), end.angle.sin());
    let path = ray::collect(start, dir, max_t);
    let Some(k) = path.iter().position(|(c, _)| *c == end.cell) else {
        return *end;
    };
    let last = path.len() as i64 - 1;
    let j = (k as i64 + shift).clamp(1.min(last), last) as usize;
    let (cell, t) = path[j];
    RayEnd { angle: end.angle, cell, t, hit: true }
}

/// Rotate the sector raster by `noise`-drawn theta about the robot cell and
/// shift it by the drawn (dx, dy); the robot pose is left untouched.
pub fn perturb_registration(sector: &SectorScan, noise: &NoiseSpec, rng: &mut impl Rng) -> SectorScan {
    if noise.reg_theta_sigma == 0.0 && noise.reg_xy_sigma == 0.0 {
        return sector.clone();
    }
    let err = sample_registration(noise, rng);
    transform_sector(sector, &err)
}

/// Deterministic core of [`perturb_registration`]: nearest-neighbour
/// resampling of the sector under the rigid transform `err`.
pub fn transform_sector(sector: &SectorScan, err: &RegistrationError) -> SectorScan {
    let src = &sector.grid;
    let res = src.resolution();
    let (sx, sy) = (err.dx / res, err.dy / res);
    let margin = sx.abs().max(sy.abs()).ceil() as i32 + 1;
    let corner = sector.corner.offset(-margin, -margin);
    let (w, h) = (src.width() + 2 * margin as usize, src.height() + 2 * margin as usize);

    let robot = Cell::new(sector.start.0.floor() as i32, sector.start.1.floor() as i32);
    let (px, py) = (robot.x as f64 + 0.5, robot.y as f64 + 0.5);
    let (sin, cos) = err.theta.sin_cos();

    let mut cells = vec![CellState::Unknown; w * h];
    for j in 0..h {
        for i in 0..w {
            // target cell center relative to the pivot, translation undone
            let u = (corner.x + i as i32) as f64 + 0.5 - px - sx;
            let v = (corner.y + j as i32) as f64 + 0.5 - py - sy;
            // inverse rotation
            let gx = px + cos * u + sin * v;
            let gy = py - sin * u + cos * v;
            let cell = Cell::new(gx.floor() as i32, gy.floor() as i32);
            cells[j * w + i] = src.get_or_unknown(sector.local(cell));
        }
    }
    let origin = (src.origin().0 - margin as f64 * res, src.origin().1 - margin as f64 * res);
    let grid = OccupancyGrid::from_cells(w, h, res, origin, cells).expect("window dimensions are consistent");
    SectorScan {
        grid,
        center: sector.center,
        rays: Vec::new(),
        start: sector.start,
        corner,
        range_cells: sector.range_cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridmap::Pose;
    use crate::sensing::{scan, SensorSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn corridor() -> OccupancyGrid {
        // free row y=5, obstacle at x=36
        let mut g = OccupancyGrid::filled(60, 11, 0.1, (0.0, 0.0), CellState::Free).unwrap();
        g.set(Cell::new(36, 5), CellState::Obstacle);
        g
    }

    fn single_ray() -> SensorSpec {
        SensorSpec { range: 5.0, fov: 0.01, angular_step: Some(0.01) }
    }

    fn global(s: &SectorScan, x: i32, y: i32) -> CellState {
        s.grid.get_or_unknown(s.local(Cell::new(x, y)))
    }

    #[test]
    fn zero_sigmas_are_identity() {
        let s = scan(&corridor(), Pose::new(0.65, 0.55, 0.0), &single_ray()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let noise = NoiseSpec::default();
        assert_eq!(perturb_ranges(&s, &noise, &mut rng), s);
        assert_eq!(perturb_registration(&s, &noise, &mut rng), s);
    }

    #[test]
    fn obstacle_pushed_two_cells_out() {
        // robot at cell 6, obstacle 30 cells ahead
        let s = scan(&corridor(), Pose::new(0.65, 0.55, 0.0), &single_ray()).unwrap();
        let hit = s.rays.iter().find(|r| r.hit).copied().unwrap();
        assert_eq!(hit.cell, Cell::new(36, 5));
        let mut out = s.clone();
        for end in out.rays.iter_mut().filter(|r| r.hit) {
            *end = shifted_end(s.start, end, 2, s.range_cells);
        }
        out.rerender();
        assert_eq!(global(&out, 38, 5), CellState::Obstacle);
        assert_eq!(global(&out, 36, 5), CellState::Free);
        assert_eq!(global(&out, 37, 5), CellState::Free);
        assert_eq!(global(&out, 39, 5), CellState::Unknown);
    }

    #[test]
    fn large_negative_shift_clamps_next_to_robot() {
        let s = scan(&corridor(), Pose::new(0.65, 0.55, 0.0), &single_ray()).unwrap();
        let hit = s.rays.iter().find(|r| r.hit).unwrap();
        let end = shifted_end(s.start, hit, -100, s.range_cells);
        assert_eq!(end.cell, Cell::new(7, 5));
        let end = shifted_end(s.start, hit, 100, s.range_cells);
        assert_eq!(end.cell, Cell::new(56, 5));
    }

    #[test]
    fn shifted_obstacles_stay_on_ray_and_in_range() {
        let g = corridor();
        let s = scan(&g, Pose::new(0.65, 0.55, 0.0), &single_ray()).unwrap();
        let noise = NoiseSpec { range_sigma: 8.0, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut moved = Vec::new();
        for _ in 0..500 {
            let out = perturb_ranges(&s, &noise, &mut rng);
            for y in 0..11 {
                for x in 0..60 {
                    if global(&out, x, y) == CellState::Obstacle {
                        assert_eq!(y, 5);
                        assert!((7..=56).contains(&x), "{x}");
                        moved.push((x - 36) as f64);
                    }
                }
            }
        }
        let mean = moved.iter().sum::<f64>() / moved.len() as f64;
        assert!(mean.abs() < 1.5, "{mean}");
    }

    #[test]
    fn range_shift_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| sample_range_shift(2.0, &mut rng) as f64).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.05, "{mean}");
        assert!((var.sqrt() - 2.0).abs() < 0.1, "{}", var.sqrt());
    }

    #[test]
    fn registration_shift_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let noise = NoiseSpec { range_sigma: 0.0, reg_theta_sigma: 0.02, reg_xy_sigma: 0.05 };
        let n = 10_000;
        let draws: Vec<RegistrationError> = (0..n).map(|_| sample_registration(&noise, &mut rng)).collect();
        let std = |f: &dyn Fn(&RegistrationError) -> f64| {
            let m = draws.iter().map(f).sum::<f64>() / n as f64;
            (draws.iter().map(|d| (f(d) - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        assert!((std(&|d| d.dx) / 0.05 - 1.0).abs() < 0.05);
        assert!((std(&|d| d.dy) / 0.05 - 1.0).abs() < 0.05);
        assert!((std(&|d| d.theta) / 0.02 - 1.0).abs() < 0.05);
    }

    #[test]
    fn quarter_turn_moves_east_wall_north() {
        let mut g = OccupancyGrid::filled(41, 41, 0.1, (0.0, 0.0), CellState::Free).unwrap();
        for y in 0..41 {
            g.set(Cell::new(30, y), CellState::Obstacle);
        }
        let s =
            scan(&g, Pose::new(2.05, 2.05, 0.0), &SensorSpec { range: 1.5, fov: 360.0, angular_step: None }).unwrap();
        assert_eq!(global(&s, 30, 20), CellState::Obstacle);
        let out = transform_sector(&s, &RegistrationError { theta: FRAC_PI_2, dx: 0.0, dy: 0.0 });
        assert_eq!(global(&out, 20, 30), CellState::Obstacle);
        assert_ne!(global(&out, 30, 20), CellState::Obstacle);
        assert_eq!(out.center, s.center);
        assert_eq!(out.grid.count(CellState::Obstacle), s.grid.count(CellState::Obstacle));
    }

    #[test]
    fn pure_translation_shifts_by_whole_cells() {
        let g = corridor();
        let s = scan(&g, Pose::new(0.65, 0.55, 0.0), &single_ray()).unwrap();
        let out = transform_sector(&s, &RegistrationError { theta: 0.0, dx: 0.3, dy: -0.1 });
        assert_eq!(global(&out, 39, 4), CellState::Obstacle);
        assert_eq!(global(&out, 36, 5), CellState::Unknown);
    }
}
