//! Household service-robot building blocks: semantic maps with navigation
//! goals, point-cloud grasp planning, an echo state network gesture
//! classifier, a domain-randomized scene/label generator and a skill planner.

#[cfg(feature = "cli")]
pub mod cli;
pub mod camera;
pub mod geometry;
pub mod grasp;
pub mod grid;
pub mod imageio;
pub mod linalg;
pub mod render;
pub mod reservoir;
pub mod rng;
pub mod scenegen;
pub mod planner;
pub mod semantic_map;
