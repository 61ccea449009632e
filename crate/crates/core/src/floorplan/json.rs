use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{Map, Value};

use super::{CanonicalSchema, FloorPlan, PlanError, SchemaAdapter};

/// Parse a canonical floor-plan document.
pub fn load_json(bytes: &[u8]) -> Result<FloorPlan, PlanError> {
    load_json_with(bytes, &CanonicalSchema::default())
}

/// Parse a document with an explicit schema adapter. The returned plan is
/// normalized to a centroid origin.
pub fn load_json_with(bytes: &[u8], schema: &dyn SchemaAdapter) -> Result<FloorPlan, PlanError> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| parse_error(bytes, &e))?;
    let Value::Object(doc) = value else {
        return Err(PlanError::Parse { offset: 0, message: "top-level value must be an object".into() });
    };
    let mut plan = schema.decode(doc)?;
    plan.normalize();
    Ok(plan)
}

fn parse_error(bytes: &[u8], err: &serde_json::Error) -> PlanError {
    let offset = byte_offset(bytes, err.line(), err.column());
    let message = err.to_string();
    if message.starts_with("number out of range") {
        PlanError::Value { path: format!("byte {offset}"), message: "number is not finite".into() }
    } else {
        PlanError::Parse { offset, message }
    }
}

/// serde_json reports 1-based line/column; column counts bytes.
fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    let mut offset = 0;
    for (i, l) in bytes.split(|&b| b == b'\n').enumerate() {
        if i + 1 == line {
            return (offset + column.saturating_sub(1)).min(bytes.len());
        }
        offset += l.len() + 1;
    }
    bytes.len()
}

/// Canonical serialization: sorted keys, pretty-printed.
pub fn save_json(plan: &FloorPlan) -> Vec<u8> {
    let mut doc: Map<String, Value> = plan.extra.clone();
    doc.insert("id".into(), Value::from(plan.id.clone()));
    doc.insert(
        "segments".into(),
        Value::Array(plan.segments.iter().map(|s| Value::from(vec![s.x1, s.y1, s.x2, s.y2])).collect()),
    );
    doc.insert(
        "rooms".into(),
        Value::Array(
            plan.rooms
                .iter()
                .map(|r| {
                    let mut o = Map::new();
                    o.insert("category".into(), Value::from(r.category.clone()));
                    o.insert("bbox".into(), Value::from(r.bbox.to_vec()));
                    Value::Object(o)
                })
                .collect(),
        ),
    );
    doc.insert("offset".into(), Value::from(vec![plan.offset.0, plan.offset.1]));
    let mut out = serde_json::to_vec_pretty(&Value::Object(doc)).expect("in-memory JSON serialization");
    out.push(b'\n');
    out
}

/// Load every `*.json` file in `dir` (non-recursive), in path order.
pub fn load_corpus(dir: &Path, schema: &dyn SchemaAdapter) -> Result<Vec<(PathBuf, FloorPlan)>, PlanError> {
    let io_err = |source| PlanError::Io { path: dir.display().to_string(), source };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json") && p.is_file())
        .collect();
    paths.sort();
    paths
        .into_par_iter()
        .map(|path| {
            let wrap = |e: PlanError| PlanError::InFile { path: path.display().to_string(), source: Box::new(e) };
            let bytes =
                std::fs::read(&path).map_err(|source| PlanError::Io { path: path.display().to_string(), source })?;
            let plan = load_json_with(&bytes, schema).map_err(wrap)?;
            Ok((path, plan))
        })
        .collect()
}
