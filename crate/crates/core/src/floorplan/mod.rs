//! Line-segment house descriptions: the JSON record format, schema adapters
//! for alternative key layouts, and corpus statistics.

mod json;
mod schema;
mod stats;

pub use json::{load_corpus, load_json, load_json_with, save_json};
pub use schema::{schema_by_name, CanonicalSchema, HouseExpoSchema, SchemaAdapter, SCHEMA_NAMES};
pub use stats::{corpus_stats, StatsOptions, StatsReport};

use serde_json::{Map, Value};
use thiserror::Error;

/// Centroid offsets at or below this magnitude count as already normalized.
pub const CENTROID_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("malformed JSON at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("schema error: key {key:?} {message}")]
    Schema { key: String, message: String },
    #[error("invalid value at {path}: {message}")]
    Value { path: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    InFile {
        path: String,
        #[source]
        source: Box<PlanError>,
    },
    #[error("statistics need at least one house with room data ({0})")]
    EmptyCorpus(String),
}

/// One wall segment in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl Segment {
    pub const fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self { x1, y1, x2, y2 }
    }

    pub fn length(&self) -> f64 {
        (self.x2 - self.x1).hypot(self.y2 - self.y1)
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self::new(self.x1 + dx, self.y1 + dy, self.x2 + dx, self.y2 + dy)
    }
}

/// A labelled room with its axis-aligned bounding box `(xmin, ymin, xmax, ymax)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RoomRecord {
    pub category: String,
    pub bbox: [f64; 4],
}

impl RoomRecord {
    pub fn new(category: impl Into<String>, bbox: [f64; 4]) -> Self {
        Self { category: category.into(), bbox }
    }
}

/// A house: wall segments around the centroid plus room metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct FloorPlan {
    pub id: String,
    pub segments: Vec<Segment>,
    pub rooms: Vec<RoomRecord>,
    /// Translation that was subtracted to bring the centroid to the origin.
    pub offset: (f64, f64),
    /// Unrecognised document keys, kept for round-tripping.
    pub extra: Map<String, Value>,
}

impl FloorPlan {
    /// In-memory plan, coordinates taken as given.
    pub fn new(id: impl Into<String>, segments: Vec<Segment>, rooms: Vec<RoomRecord>) -> Self {
        Self { id: id.into(), segments, rooms, offset: (0.0, 0.0), extra: Map::new() }
    }

    /// Mean of all segment endpoints.
    pub fn centroid(&self) -> (f64, f64) {
        if self.segments.is_empty() {
            return (0.0, 0.0);
        }
        let (sx, sy) = self.segments.iter().fold((0.0, 0.0), |(sx, sy), s| (sx + s.x1 + s.x2, sy + s.y1 + s.y2));
        let n = 2.0 * self.segments.len() as f64;
        (sx / n, sy / n)
    }

    pub fn translate(&mut self, dx: f64, dy: f64) {
        for s in &mut self.segments {
            *s = s.translated(dx, dy);
        }
        for r in &mut self.rooms {
            r.bbox = [r.bbox[0] + dx, r.bbox[1] + dy, r.bbox[2] + dx, r.bbox[3] + dy];
        }
    }

    /// Move the segment centroid to the origin, accumulating the shift in
    /// `offset`. Plans already within [`CENTROID_TOLERANCE`] are untouched.
    pub fn normalize(&mut self) {
        let (cx, cy) = self.centroid();
        if cx.hypot(cy) <= CENTROID_TOLERANCE {
            return;
        }
        self.translate(-cx, -cy);
        self.offset = (self.offset.0 + cx, self.offset.1 + cy);
    }

    /// Room count as used by statistics; `None` when the plan carries no
    /// room metadata.
    pub fn room_count(&self) -> Option<usize> {
        (!self.rooms.is_empty()).then_some(self.rooms.len())
    }

    /// True when the plan has no room records and would be treated as a
    /// single implicit room.
    pub fn has_implicit_room(&self) -> bool {
        self.rooms.is_empty()
    }

    /// Axis-aligned bounds of all segments: `(xmin, ymin, xmax, ymax)`.
    pub fn bounds(&self) -> Option<[f64; 4]> {
        let mut it = self.segments.iter();
        let first = it.next()?;
        let init = [first.x1.min(first.x2), first.y1.min(first.y2), first.x1.max(first.x2), first.y1.max(first.y2)];
        Some(it.fold(init, |b, s| {
            [b[0].min(s.x1).min(s.x2), b[1].min(s.y1).min(s.y2), b[2].max(s.x1).max(s.x2), b[3].max(s.y1).max(s.y2)]
        }))
    }

    /// Closed polygon through `points`.
    pub fn polygon(id: impl Into<String>, points: &[(f64, f64)]) -> Self {
        let n = points.len();
        let segments = (0..n)
            .map(|i| {
                let (a, b) = (points[i], points[(i + 1) % n]);
                Segment::new(a.0, a.1, b.0, b.1)
            })
            .collect();
        Self::new(id, segments, vec![])
    }
}
