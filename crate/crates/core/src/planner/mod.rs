//! Grid search and scripted exploration policies.
//!
//! Policies implement [`Policy`] and are looked up by name through
//! [`policy_by_name`], so the CLI and the benchmarks pick them at runtime.

mod astar;
mod frontier;
mod policy;

pub use astar::{astar, astar_with, Path};
pub use frontier::FrontierPolicy;
pub use policy::{policy_by_name, random_action, Policy, PolicyView, RandomPolicy, POLICY_NAMES};

use thiserror::Error;

use crate::gridmap::Cell;

#[derive(Debug, Error)]
pub enum PlannerError {
    #[error("path endpoint {0} is not a free cell")]
    BlockedEndpoint(Cell),
    #[error("unknown policy {0:?} (expected one of: {list})", list = POLICY_NAMES.join(", "))]
    UnknownPolicy(String),
}
