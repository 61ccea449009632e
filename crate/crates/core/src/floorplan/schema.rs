//! Schema adapters map a parsed JSON document onto a [`FloorPlan`].
//!
//! The canonical layout is
//!
//! ```text
//! { "id": "...",
//!   "segments": [[x1, y1, x2, y2], ...],
//!   "rooms": [{"category": "...", "bbox": [xmin, ymin, xmax, ymax]}, ...],
//!   "offset": [dx, dy] }
//! ```
//!
//! Other key names can be mapped with a custom [`CanonicalSchema`], and the
//! polygon-contour layout of the public house dataset is read by
//! [`HouseExpoSchema`].

use serde_json::{Map, Value};

use super::{FloorPlan, PlanError, RoomRecord, Segment};

pub trait SchemaAdapter: Send + Sync {
    fn name(&self) -> &str;
    fn decode(&self, doc: Map<String, Value>) -> Result<FloorPlan, PlanError>;
}

/// Registered adapter names.
pub const SCHEMA_NAMES: &[&str] = &["canonical", "houseexpo"];

pub fn schema_by_name(name: &str) -> Option<Box<dyn SchemaAdapter>> {
    match name {
        "canonical" => Some(Box::new(CanonicalSchema::default())),
        "houseexpo" => Some(Box::new(HouseExpoSchema)),
        _ => None,
    }
}

/// Canonical layout with renameable keys.
#[derive(Debug, Clone)]
pub struct CanonicalSchema {
    pub id_key: String,
    pub segments_key: String,
    pub rooms_key: String,
    pub category_key: String,
    pub bbox_key: String,
}

impl Default for CanonicalSchema {
    fn default() -> Self {
        Self {
            id_key: "id".into(),
            segments_key: "segments".into(),
            rooms_key: "rooms".into(),
            category_key: "category".into(),
            bbox_key: "bbox".into(),
        }
    }
}

fn schema_err(key: &str, message: impl Into<String>) -> PlanError {
    PlanError::Schema { key: key.to_string(), message: message.into() }
}

fn finite(value: &Value, path: &str) -> Result<f64, PlanError> {
    let v = value.as_f64().ok_or_else(|| PlanError::Value {
        path: path.to_string(),
        message: format!("expected a number, found {value}"),
    })?;
    if !v.is_finite() {
        return Err(PlanError::Value { path: path.to_string(), message: "number is not finite".into() });
    }
    Ok(v)
}

fn numbers<const N: usize>(value: &Value, path: &str) -> Result<[f64; N], PlanError> {
    let arr = value.as_array().filter(|a| a.len() == N).ok_or_else(|| PlanError::Value {
        path: path.to_string(),
        message: format!("expected an array of {N} numbers"),
    })?;
    let mut out = [0.0; N];
    for (i, v) in arr.iter().enumerate() {
        out[i] = finite(v, &format!("{path}[{i}]"))?;
    }
    Ok(out)
}

fn take_id(doc: &mut Map<String, Value>, key: &str) -> Result<String, PlanError> {
    match doc.remove(key) {
        Some(Value::String(s)) => Ok(s),
        Some(Value::Number(n)) => Ok(n.to_string()),
        Some(other) => Err(schema_err(key, format!("must be a string, found {other}"))),
        None => Err(schema_err(key, "is required")),
    }
}

fn take_offset(doc: &mut Map<String, Value>) -> Result<(f64, f64), PlanError> {
    match doc.remove("offset") {
        Some(v) => {
            let [x, y] = numbers::<2>(&v, "offset")?;
            Ok((x, y))
        }
        None => Ok((0.0, 0.0)),
    }
}

fn check_bbox(bbox: [f64; 4], path: &str) -> Result<(), PlanError> {
    if bbox[0] < bbox[2] && bbox[1] < bbox[3] {
        Ok(())
    } else {
        Err(PlanError::Value {
            path: path.to_string(),
            message: "bbox must satisfy xmin < xmax and ymin < ymax".into(),
        })
    }
}

impl SchemaAdapter for CanonicalSchema {
    fn name(&self) -> &str {
        "canonical"
    }

    fn decode(&self, mut doc: Map<String, Value>) -> Result<FloorPlan, PlanError> {
        let id = take_id(&mut doc, &self.id_key)?;
        let seg_value = doc.remove(&self.segments_key).ok_or_else(|| schema_err(&self.segments_key, "is required"))?;
        let seg_items = seg_value
            .as_array()
            .ok_or_else(|| schema_err(&self.segments_key, "must be an array of [x1, y1, x2, y2]"))?;
        let mut segments = Vec::with_capacity(seg_items.len());
        for (i, item) in seg_items.iter().enumerate() {
            let [x1, y1, x2, y2] = numbers::<4>(item, &format!("{}[{i}]", self.segments_key))?;
            segments.push(Segment::new(x1, y1, x2, y2));
        }

        let mut rooms = Vec::new();
        if let Some(room_value) = doc.remove(&self.rooms_key) {
            let items =
                room_value.as_array().ok_or_else(|| schema_err(&self.rooms_key, "must be an array of room objects"))?;
            for (i, item) in items.iter().enumerate() {
                let path = format!("{}[{i}]", self.rooms_key);
                let obj = item
                    .as_object()
                    .ok_or_else(|| PlanError::Value { path: path.clone(), message: "expected an object".into() })?;
                let category =
                    obj.get(&self.category_key).and_then(Value::as_str).filter(|s| !s.is_empty()).ok_or_else(|| {
                        schema_err(&self.category_key, format!("at {path} must be a non-empty string"))
                    })?;
                let bbox_value = obj
                    .get(&self.bbox_key)
                    .ok_or_else(|| schema_err(&self.bbox_key, format!("at {path} is required")))?;
                let bbox_path = format!("{path}.{}", self.bbox_key);
                let bbox = numbers::<4>(bbox_value, &bbox_path)?;
                check_bbox(bbox, &bbox_path)?;
                rooms.push(RoomRecord::new(category, bbox));
            }
        }
        let offset = take_offset(&mut doc)?;
        Ok(FloorPlan { id, segments, rooms, offset, extra: doc })
    }
}

/// Contour-polygon layout: `verts` is the closed outline of the free space
/// and `room_category` maps each label to a list of room bounding boxes.
#[derive(Debug, Clone, Copy, Default)]
pub struct HouseExpoSchema;

impl SchemaAdapter for HouseExpoSchema {
    fn name(&self) -> &str {
        "houseexpo"
    }

    fn decode(&self, mut doc: Map<String, Value>) -> Result<FloorPlan, PlanError> {
        let id = take_id(&mut doc, "id")?;
        let verts_value = doc.remove("verts").ok_or_else(|| schema_err("verts", "is required"))?;
        let verts = verts_value.as_array().ok_or_else(|| schema_err("verts", "must be an array of [x, y] points"))?;
        let mut points = Vec::with_capacity(verts.len());
        for (i, v) in verts.iter().enumerate() {
            let [x, y] = numbers::<2>(v, &format!("verts[{i}]"))?;
            points.push((x, y));
        }
        let mut plan = FloorPlan::polygon(id, &points);

        if let Some(cats) = doc.remove("room_category") {
            let cats = cats.as_object().ok_or_else(|| schema_err("room_category", "must map labels to bbox lists"))?;
            // BTreeMap-backed: iteration is sorted by label
            for (label, boxes) in cats {
                let boxes = boxes
                    .as_array()
                    .ok_or_else(|| schema_err("room_category", format!("entry {label:?} must be a list")))?;
                for (i, b) in boxes.iter().enumerate() {
                    let path = format!("room_category.{label}[{i}]");
                    let bbox = numbers::<4>(b, &path)?;
                    check_bbox(bbox, &path)?;
                    plan.rooms.push(RoomRecord::new(label.clone(), bbox));
                }
            }
        }
        plan.offset = take_offset(&mut doc)?;
        plan.extra = doc;
        Ok(plan)
    }
}
