use rand::{Rng, RngCore};

use super::{
    dijkstra, holonomic_only, planar_hash::PlanarHash, to_trajectory, Budget, MotionPlanner, PlanOutcome, PlannerParams, Roadmap,
    Tracker, UnionFind,
};
use crate::cspace::{CSpace, Configuration, Query, Trajectory};
use crate::error::{HarpError, Result};

/// Extra acceptance test applied to every node and edge interpolant.
pub type StateFilter<'f> = dyn Fn(&[f64]) -> bool + 'f;

#[derive(Clone, Debug)]
pub struct LlpParams {
    pub planner: PlannerParams,
    /// Total number of initial trees, counting the start and goal trees.
    pub n_trees: usize,
    /// How many of the non-endpoint roots are drawn from `seed_pool`.
    pub cr_seeds: usize,
    /// Fraction of expansion targets drawn from `expansion_pool`.
    pub cr_fraction: f64,
    /// Trees are linked when nodes come within this many extension steps.
    pub link_radius_steps: f64,
    pub seed_pool: Vec<Configuration>,
    pub expansion_pool: Vec<Configuration>,
}

impl Default for LlpParams {
    fn default() -> Self {
        LlpParams {
            planner: PlannerParams::default(),
            n_trees: 10,
            cr_seeds: 0,
            cr_fraction: 0.25,
            link_radius_steps: 2.0,
            seed_pool: Vec::new(),
            expansion_pool: Vec::new(),
        }
    }
}

/// Mixture of critical-region samples and uniform samples used as expansion
/// targets. The uniform share `1 - cr_fraction` is always positive, so every
/// free cell keeps non-zero sampling probability whatever the pool contains.
#[derive(Clone, Copy, Debug)]
pub struct ExpansionSampler<'p> {
    cr_fraction: f64,
    pool: &'p [Configuration],
}

impl<'p> ExpansionSampler<'p> {
    pub fn new(cr_fraction: f64, pool: &'p [Configuration]) -> Result<Self> {
        if !(0.0..1.0).contains(&cr_fraction) {
            return Err(HarpError::InvalidParameter(format!(
                "critical-region fraction must lie in [0, 1), got {cr_fraction}"
            )));
        }
        Ok(ExpansionSampler { cr_fraction, pool })
    }

    pub fn uniform_share(&self) -> f64 {
        if self.pool.is_empty() {
            1.0
        } else {
            1.0 - self.cr_fraction
        }
    }

    /// Next target and whether it came from the critical-region pool.
    pub fn draw<R: RngCore + ?Sized>(&self, space: &CSpace, rng: &mut R) -> (Configuration, bool) {
        if !self.pool.is_empty() && rng.gen::<f64>() < self.cr_fraction {
            (self.pool[rng.gen_range(0..self.pool.len())].clone(), true)
        } else {
            (space.sample_uniform(rng), false)
        }
    }
}

/// Learn-and-link style multi-tree planner: trees rooted at the endpoints,
/// at critical-region seeds and at uniform samples grow by nearest-node
/// extension and are linked whenever they come close; once start and goal
/// share a tree, Dijkstra extracts the path.
pub struct Llp<'f> {
    pub params: LlpParams,
    filter: Option<Box<StateFilter<'f>>>,
}

impl<'f> Llp<'f> {
    pub fn new(params: LlpParams) -> Self {
        Llp { params, filter: None }
    }

    /// Restricts nodes and local paths to configurations accepted by `filter`.
    pub fn with_filter(mut self, filter: impl Fn(&[f64]) -> bool + 'f) -> Self {
        self.filter = Some(Box::new(filter));
        self
    }

    fn accepts(&self, x: &[f64]) -> bool {
        self.filter.as_ref().map_or(true, |f| f(x))
    }

    fn valid_node(&self, tr: &Tracker, x: &[f64]) -> bool {
        tr.free(x) && self.accepts(x)
    }

    fn valid_edge(&self, tr: &Tracker, a: &[f64], b: &[f64]) -> bool {
        match &self.filter {
            None => tr.segment(a, b),
            Some(f) => tr.segment_with(a, b, |x| f(x)),
        }
    }
}

struct Forest {
    map: Roadmap,
    uf: UnionFind,
    hash: PlanarHash,
}

impl Forest {
    fn add(&mut self, x: Vec<f64>) -> usize {
        self.uf.push();
        let id = self.map.len();
        self.hash.insert(id, &x);
        self.map.add_vertex(Configuration(x))
    }

    /// Links `new` to the nearest node of every other tree within `radius`.
    /// Returns the nearest node of any other tree, linked or not.
    fn link(&mut self, llp: &Llp, tr: &Tracker, new: usize, radius: f64) -> Option<usize> {
        let space = tr.space;
        let own = self.uf.find(new);
        // (tree root, distance, node)
        let mut best: Vec<(usize, f64, usize)> = Vec::new();
        let x = self.map.vertices[new].0.clone();
        for i in self.hash.within(space, &self.map.vertices, &x, radius) {
            let r = self.uf.find(i);
            if r == own {
                continue;
            }
            let d = space.dist(&self.map.vertices[i].0, &x);
            match best.iter_mut().find(|b| b.0 == r) {
                Some(b) if d < b.1 => *b = (r, d, i),
                Some(_) => {}
                None => best.push((r, d, i)),
            }
        }
        best.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.2.cmp(&b.2)));
        for (_, _, i) in best {
            if self.uf.same(new, i) {
                continue;
            }
            if llp.valid_edge(tr, &self.map.vertices[new].0, &self.map.vertices[i].0) {
                self.map.connect(space, new, i);
                self.uf.union(new, i);
            }
        }
        let own = self.uf.find(new);
        let uf = &mut self.uf;
        self.hash
            .nearest_where(space, &self.map.vertices, &x, f64::INFINITY, |i| uf.find(i) != own)
            .map(|(i, _)| i)
    }

    /// Extends from `from` toward `to` until blocked or joined.
    fn connect(&mut self, llp: &Llp, tr: &Tracker, mut from: usize, to: usize, step: f64) {
        let space = tr.space;
        let goal = self.map.vertices[to].0.clone();
        loop {
            let here = self.map.vertices[from].0.clone();
            if space.dist(&here, &goal) <= step {
                if llp.valid_edge(tr, &here, &goal) {
                    self.map.connect(space, from, to);
                    self.uf.union(from, to);
                }
                return;
            }
            let next = space.steer_toward(&here, &goal, step).0;
            if !llp.valid_node(tr, &next) || !llp.valid_edge(tr, &here, &next) {
                return;
            }
            let id = self.add(next);
            self.map.connect(space, from, id);
            self.uf.union(from, id);
            from = id;
        }
    }
}

impl MotionPlanner for Llp<'_> {
    fn name(&self) -> &'static str {
        "llp"
    }

    fn plan(&self, space: &CSpace, query: &Query, budget: Budget, rng: &mut dyn RngCore) -> Result<PlanOutcome> {
        holonomic_only(space, "llp")?;
        query.validate(space)?;
        let p = &self.params;
        if p.cr_seeds > p.n_trees {
            return Err(HarpError::InvalidParameter(format!(
                "critical-region seeds ({}) exceed tree count ({})",
                p.cr_seeds, p.n_trees
            )));
        }
        let sampler = ExpansionSampler::new(p.cr_fraction, &p.expansion_pool)?;
        let mut tr = Tracker::new(space, budget, p.planner.check_step(space));
        if query.start == query.goal {
            return Ok(PlanOutcome {
                trajectory: Some(Trajectory::stationary(query.start.clone())),
                stats: tr.stats(1),
            });
        }
        let step = p.planner.step(space);
        let radius = p.link_radius_steps * step;
        let mut forest = Forest {
            map: Roadmap::new(),
            uf: UnionFind::new(0),
            hash: PlanarHash::new(space, step),
        };
        let s = forest.add(query.start.0.clone());
        let g = forest.add(query.goal.0.clone());
        forest.link(self, &tr, g, radius);

        let extra_roots = p.n_trees.saturating_sub(2);
        let cr_roots = if p.seed_pool.is_empty() {
            0
        } else {
            p.cr_seeds.min(extra_roots)
        };
        let mut placed = 0;
        while placed < extra_roots && !forest.uf.same(s, g) {
            if !tr.next_sample() {
                break;
            }
            let x = if placed < cr_roots {
                p.seed_pool[rng.gen_range(0..p.seed_pool.len())].0.clone()
            } else {
                space.sample_uniform(rng).0
            };
            if !self.valid_node(&tr, &x) {
                // seeds from the pool are collision-free; uniform roots retry
                if placed < cr_roots {
                    placed += 1;
                }
                continue;
            }
            placed += 1;
            let id = forest.add(x);
            forest.link(self, &tr, id, radius);
        }

        while !forest.uf.same(s, g) {
            if !tr.next_sample() {
                return Ok(PlanOutcome {
                    trajectory: None,
                    stats: tr.stats(forest.map.len()),
                });
            }
            let (target, _) = sampler.draw(space, rng);
            let (near, _) = forest
                .hash
                .nearest_where(space, &forest.map.vertices, &target.0, f64::INFINITY, |_| true)
                .expect("forest holds the endpoints");
            let new = space.steer_toward(&forest.map.vertices[near].0, &target.0, step).0;
            if !self.valid_node(&tr, &new) || !self.valid_edge(&tr, &forest.map.vertices[near].0, &new) {
                continue;
            }
            let id = forest.add(new);
            forest.map.connect(space, near, id);
            forest.uf.union(near, id);
            if let Some(other) = forest.link(self, &tr, id, radius) {
                forest.connect(self, &tr, id, other, step);
            }
        }
        let (path, _) = dijkstra(&forest.map, s, g).expect("start and goal share a tree");
        let pts = path
            .into_iter()
            .map(|i| forest.map.vertices[i].0.clone())
            .collect();
        Ok(PlanOutcome {
            trajectory: Some(to_trajectory(pts)),
            stats: tr.stats(forest.map.len()),
        })
    }
}
