use rand::RngCore;

use super::{
    dijkstra, holonomic_only, to_trajectory, Budget, MotionPlanner, PlanOutcome, PlannerParams, Roadmap, Tracker,
    UnionFind,
};
use crate::cspace::{CSpace, Query, Trajectory};
use crate::error::Result;

/// Incremental PRM: each free sample is wired to its nearest roadmap vertices
/// until start and goal share a component, then Dijkstra extracts the path.
#[derive(Clone, Debug)]
pub struct Prm {
    pub params: PlannerParams,
    /// Maximum neighbors tried per new vertex.
    pub k_neighbors: usize,
    /// Connection radius as a multiple of the extension step.
    pub radius_steps: f64,
}

impl Default for Prm {
    fn default() -> Self {
        Prm {
            params: PlannerParams::default(),
            k_neighbors: 10,
            radius_steps: 3.0,
        }
    }
}

impl MotionPlanner for Prm {
    fn name(&self) -> &'static str {
        "prm"
    }

    fn plan(&self, space: &CSpace, query: &Query, budget: Budget, rng: &mut dyn RngCore) -> Result<PlanOutcome> {
        holonomic_only(space, "prm")?;
        query.validate(space)?;
        let mut tr = Tracker::new(space, budget, self.params.check_step(space));
        if query.start == query.goal {
            return Ok(PlanOutcome {
                trajectory: Some(Trajectory::stationary(query.start.clone())),
                stats: tr.stats(1),
            });
        }
        let radius = self.radius_steps * self.params.step(space);
        let mut map = Roadmap::new();
        let mut uf = UnionFind::new(0);
        for x in [&query.start, &query.goal] {
            map.add_vertex(x.clone());
            uf.push();
        }
        if tr.segment(&query.start.0, &query.goal.0) {
            map.connect(space, 0, 1);
            uf.union(0, 1);
        }
        while !uf.same(0, 1) {
            if !tr.next_sample() {
                return Ok(PlanOutcome {
                    trajectory: None,
                    stats: tr.stats(map.len()),
                });
            }
            let x = space.sample_uniform(rng);
            if !tr.free(&x.0) {
                continue;
            }
            let mut near: Vec<(f64, usize)> = map
                .vertices
                .iter()
                .enumerate()
                .map(|(i, v)| (space.dist(&v.0, &x.0), i))
                .filter(|(d, _)| *d <= radius)
                .collect();
            near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            near.truncate(self.k_neighbors);
            let id = map.add_vertex(x);
            uf.push();
            for (_, j) in near {
                if uf.same(id, j) {
                    continue;
                }
                if tr.segment(&map.vertices[id].0, &map.vertices[j].0) {
                    map.connect(space, id, j);
                    uf.union(id, j);
                }
            }
        }
        let (path, _) = dijkstra(&map, 0, 1).expect("start and goal share a component");
        let pts = path.into_iter().map(|i| map.vertices[i].0.clone()).collect();
        Ok(PlanOutcome {
            trajectory: Some(to_trajectory(pts)),
            stats: tr.stats(map.len()),
        })
    }
}
