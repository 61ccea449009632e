//! Random rectangular houses built by recursive splitting. Good enough to
//! exercise the pipeline without a dataset on disk.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::floorplan::{FloorPlan, RoomRecord, Segment};

const CATEGORIES: [&str; 6] = ["bedroom", "kitchen", "bathroom", "living_room", "dining_room", "office"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    /// Outer footprint in meters.
    pub width: f64,
    pub height: f64,
    pub rooms: usize,
    /// Doorway left in every interior wall; `None` seals the rooms off.
    pub door_width: Option<f64>,
    /// Rooms are never split below this size.
    pub min_room: f64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self { width: 10.0, height: 8.0, rooms: 4, door_width: Some(1.0), min_room: 2.0 }
    }
}

#[derive(Clone, Copy)]
struct Rect {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Rect {
    fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }
}

/// A single empty room of `width` × `height` meters.
pub fn empty_room(id: &str, width: f64, height: f64) -> FloorPlan {
    let spec = SynthSpec { width, height, rooms: 1, door_width: None, min_room: width.min(height) };
    // a single room never draws from the stream
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
    house(id, &spec, &mut rng)
}

/// Split the footprint into `spec.rooms` rectangles (largest room first,
/// across its longer side) and emit the walls.
pub fn house(id: &str, spec: &SynthSpec, rng: &mut impl Rng) -> FloorPlan {
    let (w, h) = (spec.width, spec.height);
    let mut segments = vec![
        Segment::new(0.0, 0.0, w, 0.0),
        Segment::new(w, 0.0, w, h),
        Segment::new(w, h, 0.0, h),
        Segment::new(0.0, h, 0.0, 0.0),
    ];
    let mut rooms = vec![Rect { x0: 0.0, y0: 0.0, x1: w, y1: h }];
    while rooms.len() < spec.rooms.max(1) {
        let (k, _) = rooms
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.area().total_cmp(&b.1.area()).then(b.0.cmp(&a.0)))
            .expect("at least one room");
        let r = rooms[k];
        let vertical = r.x1 - r.x0 >= r.y1 - r.y0;
        let span = if vertical { r.x1 - r.x0 } else { r.y1 - r.y0 };
        if span < 2.0 * spec.min_room {
            break;
        }
        let lo = spec.min_room.max(0.35 * span);
        let hi = (span - spec.min_room).min(0.65 * span);
        let cut = if hi > lo { rng.random_range(lo..hi) } else { 0.5 * span };
        let (a, b, wall) = if vertical {
            let x = r.x0 + cut;
            (Rect { x1: x, ..r }, Rect { x0: x, ..r }, (x, r.y0, x, r.y1))
        } else {
            let y = r.y0 + cut;
            (Rect { y1: y, ..r }, Rect { y0: y, ..r }, (r.x0, y, r.x1, y))
        };
        segments.extend(wall_with_door(wall, spec.door_width, rng));
        rooms[k] = a;
        rooms.push(b);
    }
    let records = rooms
        .iter()
        .enumerate()
        .map(|(i, r)| RoomRecord::new(CATEGORIES[i % CATEGORIES.len()], [r.x0, r.y0, r.x1, r.y1]))
        .collect();
    FloorPlan::new(id, segments, records)
}

fn wall_with_door(wall: (f64, f64, f64, f64), door: Option<f64>, rng: &mut impl Rng) -> Vec<Segment> {
    let (x0, y0, x1, y1) = wall;
    let len = (x1 - x0).hypot(y1 - y0);
    let Some(door) = door.filter(|&d| d + 0.6 < len) else {
        return vec![Segment::new(x0, y0, x1, y1)];
    };
    let start = rng.random_range(0.3..len - door - 0.3);
    let (ux, uy) = ((x1 - x0) / len, (y1 - y0) / len);
    let at = |t: f64| (x0 + ux * t, y0 + uy * t);
    let (p, q) = (at(start), at(start + door));
    vec![Segment::new(x0, y0, p.0, p.1), Segment::new(q.0, q.1, x1, y1)]
}
