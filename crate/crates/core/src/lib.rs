//! Hierarchical abstraction-guided robot planning.
//!
//! Critical regions are estimated from corpora of solved plans
//! ([`critical_regions`]), turned into an implicit region-based Voronoi
//! abstraction ([`abstraction`]), searched with a multi-source beam search
//! ([`hl_search`]) and refined with a seeded multi-tree planner
//! ([`ll_planner`]). [`harp`] ties these together and [`bench`] runs the
//! success-rate and heuristic-learning experiments.

pub mod abstraction;
pub mod bench;
pub mod critical_regions;
pub mod cspace;
pub mod envs;
pub mod error;
pub mod harp;
pub mod hl_search;
pub mod ll_planner;
pub mod seeding;

pub use cspace::{CSpace, Configuration, Query, RobotModel, Trajectory, Workspace};
pub use error::{HarpError, Result};
