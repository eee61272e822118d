use rand::RngCore;

use super::{holonomic_only, nearest, to_trajectory, trace, Budget, MotionPlanner, PlanOutcome, PlannerParams, Tracker};
use crate::cspace::{CSpace, Query, Trajectory};
use crate::error::Result;

/// RRT-Connect: two trees, one extend step and one greedy connect per sample.
#[derive(Clone, Debug, Default)]
pub struct BiRrt {
    pub params: PlannerParams,
}

struct Tree {
    nodes: Vec<Vec<f64>>,
    parents: Vec<usize>,
}

impl Tree {
    fn rooted(x: Vec<f64>) -> Self {
        Tree {
            nodes: vec![x],
            parents: vec![0],
        }
    }

    fn push(&mut self, x: Vec<f64>, parent: usize) -> usize {
        self.nodes.push(x);
        self.parents.push(parent);
        self.nodes.len() - 1
    }

    fn path_to(&self, leaf: usize) -> Vec<Vec<f64>> {
        trace(&self.parents, leaf)
            .into_iter()
            .map(|i| self.nodes[i].clone())
            .collect()
    }
}

enum Extend {
    Trapped,
    Advanced(usize),
    Reached(usize),
}

fn extend(tr: &Tracker, tree: &mut Tree, target: &[f64], step: f64) -> Extend {
    let space = tr.space;
    let near = nearest(space, &tree.nodes, target);
    let new = space.steer_toward(&tree.nodes[near], target, step).0;
    if !tr.free(&new) || !tr.segment(&tree.nodes[near], &new) {
        return Extend::Trapped;
    }
    let reached = new.as_slice() == target;
    let id = tree.push(new, near);
    if reached {
        Extend::Reached(id)
    } else {
        Extend::Advanced(id)
    }
}

impl BiRrt {
    pub fn new(params: PlannerParams) -> Self {
        BiRrt { params }
    }
}

impl MotionPlanner for BiRrt {
    fn name(&self) -> &'static str {
        "birrt"
    }

    fn plan(&self, space: &CSpace, query: &Query, budget: Budget, rng: &mut dyn RngCore) -> Result<PlanOutcome> {
        holonomic_only(space, "birrt")?;
        query.validate(space)?;
        let mut tr = Tracker::new(space, budget, self.params.check_step(space));
        if query.start == query.goal {
            return Ok(PlanOutcome {
                trajectory: Some(Trajectory::stationary(query.start.clone())),
                stats: tr.stats(1),
            });
        }
        let step = self.params.step(space);
        let mut a = Tree::rooted(query.start.0.clone());
        let mut b = Tree::rooted(query.goal.0.clone());
        let mut a_is_start = true;
        while tr.next_sample() {
            let q = space.sample_uniform(rng).0;
            if let Extend::Advanced(new) | Extend::Reached(new) = extend(&tr, &mut a, &q, step) {
                let target = a.nodes[new].clone();
                loop {
                    match extend(&tr, &mut b, &target, step) {
                        Extend::Advanced(_) => continue,
                        Extend::Trapped => break,
                        Extend::Reached(meet) => {
                            let (mut head, tail) = if a_is_start {
                                (a.path_to(new), b.path_to(meet))
                            } else {
                                (b.path_to(meet), a.path_to(new))
                            };
                            // both paths end at the shared meeting point
                            head.pop();
                            head.extend(tail.into_iter().rev());
                            return Ok(PlanOutcome {
                                trajectory: Some(to_trajectory(head)),
                                stats: tr.stats(a.nodes.len() + b.nodes.len()),
                            });
                        }
                    }
                }
            }
            std::mem::swap(&mut a, &mut b);
            a_is_start = !a_is_start;
        }
        Ok(PlanOutcome {
            trajectory: None,
            stats: tr.stats(a.nodes.len() + b.nodes.len()),
        })
    }
}
