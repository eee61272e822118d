//! Low-level sampling-based planners.
//!
//! [`Llp`] is the multi-tree link planner used to refine abstract plans; it
//! accepts critical-region samples both as tree roots and as expansion
//! targets. [`Rrt`], [`BiRrt`] and [`Prm`] are textbook baselines. All
//! planners share [`Budget`] semantics: a query stops as soon as either the
//! wall-clock or the sample limit is reached.

mod birrt;
mod llp;
mod planar_hash;
mod prm;
mod roadmap;
mod rrt;
mod union_find;

use std::cell::Cell;
use std::time::Instant;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::cspace::{CSpace, Configuration, Query, Trajectory};
use crate::error::{HarpError, Result};

pub use birrt::BiRrt;
pub use llp::{ExpansionSampler, Llp, LlpParams, StateFilter};
pub use prm::Prm;
pub use roadmap::{dijkstra, Roadmap};
pub use rrt::Rrt;
pub use union_find::UnionFind;

/// Stop condition for a planning query. `None` means no limit on that axis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_seconds: Option<f64>,
    pub max_samples: Option<u64>,
}

impl Budget {
    pub fn seconds(s: f64) -> Self {
        Budget {
            max_seconds: Some(s),
            max_samples: None,
        }
    }

    pub fn samples(n: u64) -> Self {
        Budget {
            max_seconds: None,
            max_samples: Some(n),
        }
    }

    /// Splits off `fraction` of this budget.
    pub fn scaled(&self, fraction: f64) -> Self {
        Budget {
            max_seconds: self.max_seconds.map(|s| s * fraction),
            max_samples: self
                .max_samples
                .map(|n| ((n as f64) * fraction).round() as u64),
        }
    }

    /// What is left after `used_seconds` and `used_samples` were spent.
    pub fn remaining(&self, used_seconds: f64, used_samples: u64) -> Self {
        Budget {
            max_seconds: self.max_seconds.map(|s| (s - used_seconds).max(0.0)),
            max_samples: self.max_samples.map(|n| n.saturating_sub(used_samples)),
        }
    }

    pub fn is_unbounded(&self) -> bool {
        self.max_seconds.is_none() && self.max_samples.is_none()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanStats {
    pub samples: u64,
    pub collision_checks: u64,
    pub nodes: usize,
    pub elapsed_seconds: f64,
}

impl PlanStats {
    pub fn absorb(&mut self, other: &PlanStats) {
        self.samples += other.samples;
        self.collision_checks += other.collision_checks;
        self.nodes += other.nodes;
        self.elapsed_seconds += other.elapsed_seconds;
    }
}

#[derive(Clone, Debug)]
pub struct PlanOutcome {
    pub trajectory: Option<Trajectory>,
    pub stats: PlanStats,
}

pub trait MotionPlanner {
    fn name(&self) -> &'static str;

    /// Plans from `query.start` to `query.goal`. Exhausting the budget yields
    /// an outcome without a trajectory; malformed inputs are errors.
    fn plan(
        &self,
        space: &CSpace,
        query: &Query,
        budget: Budget,
        rng: &mut dyn RngCore,
    ) -> Result<PlanOutcome>;
}

/// Shared tuning for the tree and roadmap planners.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlannerParams {
    /// Extension step in metric units; defaults to 4 grid cells.
    pub step: Option<f64>,
    /// Local-path check spacing; defaults to half a grid cell.
    pub check_step: Option<f64>,
    pub goal_bias: f64,
}

impl Default for PlannerParams {
    fn default() -> Self {
        PlannerParams {
            step: None,
            check_step: None,
            goal_bias: 0.05,
        }
    }
}

impl PlannerParams {
    pub fn step(&self, space: &CSpace) -> f64 {
        self.step.unwrap_or(4.0 * space.resolution())
    }

    pub fn check_step(&self, space: &CSpace) -> f64 {
        self.check_step.unwrap_or_else(|| space.default_step())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlannerKind {
    Harp,
    Llp,
    Rrt,
    Birrt,
    Prm,
}

impl PlannerKind {
    pub fn name(&self) -> &'static str {
        match self {
            PlannerKind::Harp => "harp",
            PlannerKind::Llp => "llp",
            PlannerKind::Rrt => "rrt",
            PlannerKind::Birrt => "birrt",
            PlannerKind::Prm => "prm",
        }
    }

    pub fn all() -> [PlannerKind; 5] {
        [
            PlannerKind::Harp,
            PlannerKind::Llp,
            PlannerKind::Rrt,
            PlannerKind::Birrt,
            PlannerKind::Prm,
        ]
    }
}

impl std::str::FromStr for PlannerKind {
    type Err = HarpError;
    fn from_str(s: &str) -> Result<Self> {
        PlannerKind::all()
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| HarpError::InvalidParameter(format!("unknown planner {s:?}")))
    }
}

impl std::fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Budget clock plus collision-check accounting for one query.
pub(crate) struct Tracker<'a> {
    pub space: &'a CSpace,
    pub check_step: f64,
    budget: Budget,
    started: Instant,
    samples: u64,
    checks: Cell<u64>,
}

impl<'a> Tracker<'a> {
    pub fn new(space: &'a CSpace, budget: Budget, check_step: f64) -> Self {
        Tracker {
            space,
            check_step,
            budget,
            started: Instant::now(),
            samples: 0,
            checks: Cell::new(0),
        }
    }

    /// Counts one sample; false once the budget is spent.
    pub fn next_sample(&mut self) -> bool {
        if self.exhausted() {
            return false;
        }
        self.samples += 1;
        true
    }

    pub fn exhausted(&self) -> bool {
        if let Some(n) = self.budget.max_samples {
            if self.samples >= n {
                return true;
            }
        }
        if let Some(s) = self.budget.max_seconds {
            if self.started.elapsed().as_secs_f64() >= s {
                return true;
            }
        }
        false
    }

    pub fn free(&self, x: &[f64]) -> bool {
        self.checks.set(self.checks.get() + 1);
        !self.space.collides(x)
    }

    pub fn segment(&self, a: &[f64], b: &[f64]) -> bool {
        self.segment_with(a, b, |_| true)
    }

    pub fn segment_with(&self, a: &[f64], b: &[f64], mut accept: impl FnMut(&[f64]) -> bool) -> bool {
        let mut n = 0;
        let ok = self.space.segment_free_with(a, b, self.check_step, |x| {
            n += 1;
            accept(x)
        });
        self.checks.set(self.checks.get() + n + 1);
        ok
    }

    pub fn stats(&self, nodes: usize) -> PlanStats {
        PlanStats {
            samples: self.samples,
            collision_checks: self.checks.get(),
            nodes,
            elapsed_seconds: self.started.elapsed().as_secs_f64(),
        }
    }
}

pub(crate) fn nearest<T: AsRef<[f64]>>(space: &CSpace, nodes: &[T], x: &[f64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, n) in nodes.iter().enumerate() {
        let d = space.dist_sq(n.as_ref(), x);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Walks parent pointers from `leaf` back to the root.
pub(crate) fn trace(parents: &[usize], leaf: usize) -> Vec<usize> {
    let mut path = vec![leaf];
    let mut v = leaf;
    while parents[v] != v {
        v = parents[v];
        path.push(v);
    }
    path.reverse();
    path
}

pub(crate) fn holonomic_only(space: &CSpace, planner: &str) -> Result<()> {
    if space.robot().is_holonomic() {
        Ok(())
    } else {
        Err(HarpError::Unsupported(format!(
            "{planner} requires a holonomic robot"
        )))
    }
}

pub(crate) fn to_trajectory(points: Vec<Vec<f64>>) -> Trajectory {
    let mut wps: Vec<Configuration> = points.into_iter().map(Configuration).collect();
    if wps.len() == 1 {
        wps.push(wps[0].clone());
    }
    Trajectory::new(wps).expect("planner paths have at least two waypoints")
}

/// Boxed planner of the given kind with default parameters. HARP is not a
/// plain low-level planner and is rejected here.
pub fn baseline(kind: PlannerKind) -> Result<Box<dyn MotionPlanner>> {
    Ok(match kind {
        PlannerKind::Rrt => Box::new(Rrt::default()),
        PlannerKind::Birrt => Box::new(BiRrt::default()),
        PlannerKind::Prm => Box::new(Prm::default()),
        PlannerKind::Llp => Box::new(Llp::new(LlpParams::default())),
        PlannerKind::Harp => {
            return Err(HarpError::InvalidParameter(
                "harp needs critical regions; use harp::harp_plan".into(),
            ))
        }
    })
}
