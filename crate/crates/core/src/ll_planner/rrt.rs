use rand::{Rng, RngCore};

use super::{nearest, to_trajectory, trace, Budget, ExpansionSampler, MotionPlanner, PlanOutcome, PlannerParams, Tracker};
use crate::cspace::{CSpace, CarControl, Configuration, Query, Trajectory, CAR_MAX_SPEED, CAR_MAX_STEER};
use crate::error::Result;

/// Goal-biased RRT. Holonomic robots extend along straight segments; Car3
/// extends by sampling bicycle-model controls.
#[derive(Clone, Debug)]
pub struct Rrt {
    pub params: PlannerParams,
    pub car: CarExtension,
    /// Extra expansion targets, drawn with probability `pool_fraction`.
    pub pool: Vec<Configuration>,
    pub pool_fraction: f64,
}

/// Control-sampling parameters for Car3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CarExtension {
    pub controls_per_extension: usize,
    pub duration: f64,
}

impl Default for CarExtension {
    fn default() -> Self {
        CarExtension {
            controls_per_extension: 8,
            duration: 1.5,
        }
    }
}

impl Default for Rrt {
    fn default() -> Self {
        Rrt::new(PlannerParams::default())
    }
}

impl Rrt {
    pub fn new(params: PlannerParams) -> Self {
        Rrt {
            params,
            car: CarExtension::default(),
            pool: Vec::new(),
            pool_fraction: 0.25,
        }
    }

    fn target(&self, space: &CSpace, goal: &[f64], rng: &mut dyn RngCore) -> Result<Vec<f64>> {
        if rng.gen::<f64>() < self.params.goal_bias {
            return Ok(goal.to_vec());
        }
        Ok(ExpansionSampler::new(self.pool_fraction, &self.pool)?.draw(space, rng).0 .0)
    }

    fn plan_holonomic(&self, tr: &mut Tracker, query: &Query, rng: &mut dyn RngCore) -> Result<Option<(Trajectory, usize)>> {
        let space = tr.space;
        let step = self.params.step(space);
        let goal = &query.goal.0;
        let mut nodes = vec![query.start.0.clone()];
        let mut parents = vec![0usize];
        while tr.next_sample() {
            let target = self.target(space, goal, rng)?;
            let near = nearest(space, &nodes, &target);
            let new = space.steer_toward(&nodes[near], &target, step).0;
            if !tr.free(&new) || !tr.segment(&nodes[near], &new) {
                continue;
            }
            nodes.push(new);
            parents.push(near);
            let id = nodes.len() - 1;
            if space.dist(&nodes[id], goal) <= step && tr.segment(&nodes[id], goal) {
                let mut path: Vec<Vec<f64>> = trace(&parents, id).into_iter().map(|i| nodes[i].clone()).collect();
                if path.last() != Some(goal) {
                    path.push(goal.clone());
                }
                return Ok(Some((to_trajectory(path), nodes.len())));
            }
        }
        Ok(None)
    }

    fn plan_car(&self, tr: &mut Tracker, query: &Query, rng: &mut dyn RngCore) -> Result<Option<(Trajectory, usize)>> {
        let space = tr.space;
        let step = self.params.step(space);
        let goal = &query.goal.0;
        let substeps = ((CAR_MAX_SPEED * self.car.duration / tr.check_step).ceil() as usize).max(1);
        let mut nodes = vec![query.start.0.clone()];
        let mut parents = vec![0usize];
        // rollout waypoints from the parent (exclusive) to the node (inclusive)
        let mut edges: Vec<Vec<Vec<f64>>> = vec![Vec::new()];
        while tr.next_sample() {
            let target = self.target(space, goal, rng)?;
            let near = nearest(space, &nodes, &target);
            let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
            for _ in 0..self.car.controls_per_extension {
                let control = CarControl {
                    v: rng.gen_range(-CAR_MAX_SPEED..=CAR_MAX_SPEED),
                    steer: rng.gen_range(-CAR_MAX_STEER..=CAR_MAX_STEER),
                };
                let roll = space.car_rollout(
                    &crate::cspace::Configuration(nodes[near].clone()),
                    control,
                    self.car.duration,
                    substeps,
                )?;
                let mut prev = nodes[near].as_slice();
                let mut ok = true;
                for c in &roll {
                    if !tr.segment(prev, &c.0) {
                        ok = false;
                        break;
                    }
                    prev = &c.0;
                }
                if !ok {
                    continue;
                }
                let end = &roll.last().expect("substeps >= 1").0;
                let d = space.dist(end, &target);
                if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                    best = Some((d, roll.into_iter().map(|c| c.0).collect()));
                }
            }
            let Some((_, roll)) = best else { continue };
            nodes.push(roll.last().expect("non-empty").clone());
            parents.push(near);
            edges.push(roll);
            let id = nodes.len() - 1;
            // final holonomic snap onto the exact goal
            if space.dist(&nodes[id], goal) <= step && tr.segment(&nodes[id], goal) {
                let mut path = vec![query.start.0.clone()];
                for v in trace(&parents, id).into_iter().skip(1) {
                    path.extend(edges[v].iter().cloned());
                }
                if path.last() != Some(goal) {
                    path.push(goal.clone());
                }
                return Ok(Some((to_trajectory(path), nodes.len())));
            }
        }
        Ok(None)
    }
}

impl MotionPlanner for Rrt {
    fn name(&self) -> &'static str {
        "rrt"
    }

    fn plan(&self, space: &CSpace, query: &Query, budget: Budget, rng: &mut dyn RngCore) -> Result<PlanOutcome> {
        query.validate(space)?;
        let mut tr = Tracker::new(space, budget, self.params.check_step(space));
        if query.start == query.goal {
            return Ok(PlanOutcome {
                trajectory: Some(Trajectory::stationary(query.start.clone())),
                stats: tr.stats(1),
            });
        }
        let found = if space.robot().is_holonomic() {
            self.plan_holonomic(&mut tr, query, rng)?
        } else {
            self.plan_car(&mut tr, query, rng)?
        };
        let nodes = found.as_ref().map_or(0, |(_, n)| *n);
        Ok(PlanOutcome {
            trajectory: found.map(|(t, _)| t),
            stats: tr.stats(nodes),
        })
    }
}
