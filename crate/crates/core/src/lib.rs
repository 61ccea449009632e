//! Deterministic 2D occupancy-grid exploration simulator.
//!
//! A floor plan is rasterized into a ground-truth grid; each step simulates a
//! lidar sector directly from that ground truth (occlusion, range noise and
//! registration error included) and merges it into the robot's map, skipping
//! scan matching entirely. Around that core sit the floor-plan sanitation
//! tools (small-cell filling, connectivity repair, refinement, dedup) and an
//! episodic environment with obstacle-avoidance and exploration rewards.

pub mod bench;
pub mod env;
pub mod floorplan;
pub mod gridmap;
pub mod planner;
pub mod sensing;
pub mod worldgen;
