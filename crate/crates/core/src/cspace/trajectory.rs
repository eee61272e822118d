use serde::{Deserialize, Serialize};

use super::{CSpace, Configuration};
use crate::error::{HarpError, Result};

/// Piecewise-linear path through configuration space, parameterized over
/// `[0, 1]` by cumulative metric length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    waypoints: Vec<Configuration>,
}

impl Trajectory {
    pub fn new(waypoints: Vec<Configuration>) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(HarpError::InvalidParameter(
                "trajectory needs at least two waypoints".into(),
            ));
        }
        let n = waypoints[0].len();
        if let Some(bad) = waypoints.iter().find(|w| w.len() != n) {
            return Err(HarpError::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        Ok(Trajectory { waypoints })
    }

    /// Zero-length trajectory that stays at `x`.
    pub fn stationary(x: Configuration) -> Self {
        Trajectory {
            waypoints: vec![x.clone(), x],
        }
    }

    pub fn waypoints(&self) -> &[Configuration] {
        &self.waypoints
    }

    pub fn start(&self) -> &Configuration {
        &self.waypoints[0]
    }

    pub fn end(&self) -> &Configuration {
        self.waypoints.last().expect("non-empty")
    }

    pub fn length(&self, space: &CSpace) -> f64 {
        self.waypoints
            .windows(2)
            .map(|w| space.dist(&w[0].0, &w[1].0))
            .sum()
    }

    /// `tau(t)` for `t` in `[0, 1]`.
    pub fn at(&self, space: &CSpace, t: f64) -> Configuration {
        let t = t.clamp(0.0, 1.0);
        let seg: Vec<f64> = self
            .waypoints
            .windows(2)
            .map(|w| space.dist(&w[0].0, &w[1].0))
            .collect();
        let total: f64 = seg.iter().sum();
        if total == 0.0 || t == 0.0 {
            return self.start().clone();
        }
        if t == 1.0 {
            return self.end().clone();
        }
        let mut target = t * total;
        for (i, len) in seg.iter().enumerate() {
            if target <= *len && *len > 0.0 {
                return space.interpolate(&self.waypoints[i].0, &self.waypoints[i + 1].0, target / len);
            }
            target -= len;
        }
        self.end().clone()
    }

    /// Every interpolated configuration at spacing <= `step`, in order.
    pub fn interpolants(&self, space: &CSpace, step: f64) -> Vec<Configuration> {
        let mut out = vec![self.start().clone()];
        for w in self.waypoints.windows(2) {
            out.extend(space.interpolants(&w[0].0, &w[1].0, step).into_iter().skip(1));
        }
        out
    }

    pub fn is_collision_free(&self, space: &CSpace, step: f64) -> bool {
        self.waypoints
            .windows(2)
            .all(|w| space.segment_free(&w[0].0, &w[1].0, step))
    }

    /// Endpoints match exactly and every interpolant is collision-free.
    pub fn solves(&self, space: &CSpace, start: &Configuration, goal: &Configuration, step: f64) -> bool {
        self.start() == start && self.end() == goal && self.is_collision_free(space, step)
    }

    /// Whether some point of the trajectory lies within `tol` of `x`.
    pub fn contains(&self, space: &CSpace, x: &Configuration, tol: f64) -> bool {
        self.interpolants(space, tol * 0.5)
            .iter()
            .any(|p| space.dist(&p.0, &x.0) <= tol)
    }

    pub fn reversed(&self) -> Self {
        let mut waypoints = self.waypoints.clone();
        waypoints.reverse();
        Trajectory { waypoints }
    }
}
