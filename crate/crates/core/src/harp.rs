//! The hierarchical planner: classify the endpoints, search the abstract
//! graph for candidate plans, refine them with the seeded multi-tree planner
//! and learn from the result.

use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abstraction::{AbstractGraph, Abstraction, StateId};
use crate::critical_regions::CriticalRegion;
use crate::cspace::{CSpace, Configuration, Query, Trajectory};
use crate::error::{HarpError, Result};
use crate::hl_search::{
    ms_bidirectional_beam_search, update_heuristic, AbstractSearchGraph, AbstractionDistance, BeamParams,
    HeuristicTable, HighLevelPlan,
};
use crate::ll_planner::{Budget, Llp, LlpParams, MotionPlanner, PlanOutcome, PlanStats, PlannerParams, Rrt};
use crate::seeding::rng_for;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HarpConfig {
    pub beam: BeamParams,
    /// Refinement trees, counting the start and goal trees.
    pub n_trees: usize,
    /// Roots drawn from candidate-plan regions.
    pub cr_seeds: usize,
    /// Share of expansion targets drawn from region samples.
    pub cr_fraction: f64,
    pub probes: usize,
    /// Probe budget cap when escalating after a search without a rooted plan.
    pub max_probes: usize,
    /// Budget share for refinement restricted to candidate-plan cells.
    pub confined_fraction: f64,
    pub planner: PlannerParams,
    /// Plan with uniform sampling when there are no regions or no plans.
    pub uniform_fallback: bool,
}

impl Default for HarpConfig {
    fn default() -> Self {
        HarpConfig {
            beam: BeamParams::default(),
            n_trees: 10,
            cr_seeds: 4,
            cr_fraction: 0.25,
            probes: crate::abstraction::DEFAULT_PROBES,
            max_probes: 256,
            confined_fraction: 0.5,
            planner: PlannerParams::default(),
            uniform_fallback: true,
        }
    }
}

impl HarpConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarpError::InvalidParameter(m));
        if self.beam.width == 0 || self.beam.plans == 0 {
            return bad("beam width and plan count must be >= 1".into());
        }
        if self.n_trees < 2 {
            return bad(format!("need at least 2 trees, got {}", self.n_trees));
        }
        if self.cr_seeds > self.n_trees {
            return bad(format!("cr_seeds {} exceeds n_trees {}", self.cr_seeds, self.n_trees));
        }
        if self.probes == 0 {
            return bad("probe budget must be >= 1".into());
        }
        if !(0.0..1.0).contains(&self.cr_fraction) {
            return bad(format!("cr_fraction {} outside [0, 1)", self.cr_fraction));
        }
        if !(0.0..=1.0).contains(&self.confined_fraction) {
            return bad(format!("confined_fraction {} outside [0, 1]", self.confined_fraction));
        }
        Ok(())
    }

    fn llp(&self, seed_pool: Vec<Configuration>, expansion_pool: Vec<Configuration>) -> LlpParams {
        LlpParams {
            planner: self.planner,
            n_trees: self.n_trees,
            cr_seeds: self.cr_seeds,
            cr_fraction: self.cr_fraction,
            seed_pool,
            expansion_pool,
            ..LlpParams::default()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HarpStats {
    pub success: bool,
    pub wall_seconds: f64,
    pub samples: u64,
    pub collision_checks: u64,
    pub nodes: usize,
    pub hl_plans: usize,
    /// Plans that start at the initial abstract state.
    pub rooted_plans: usize,
    /// States on any candidate plan, sorted.
    pub candidate_states: Vec<StateId>,
    pub abstract_trajectory: Vec<StateId>,
    /// Refinement ran with uniform sampling only.
    pub fallback: bool,
    /// Solved by the refinement phase restricted to candidate cells.
    pub confined_success: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlannerResult {
    pub trajectory: Option<Trajectory>,
    pub plans: Vec<HighLevelPlan>,
    pub stats: HarpStats,
}

/// Per-environment planner state: the abstraction, its neighbor verdicts and
/// the heuristic table, all reused across queries.
#[derive(Clone, Debug)]
pub struct HarpSession {
    pub config: HarpConfig,
    abstraction: Abstraction,
    graph: AbstractGraph,
    table: HeuristicTable,
}

impl HarpSession {
    pub fn new(space: &CSpace, regions: Vec<CriticalRegion>, config: HarpConfig) -> Result<Self> {
        config.validate()?;
        let abstraction = Abstraction::new(space, regions)?;
        let n = abstraction.state_count();
        Ok(HarpSession {
            graph: AbstractGraph::with_probes(n, config.probes),
            table: HeuristicTable::new(n),
            abstraction,
            config,
        })
    }

    pub fn abstraction(&self) -> &Abstraction {
        &self.abstraction
    }

    pub fn graph(&self) -> &AbstractGraph {
        &self.graph
    }

    pub fn graph_mut(&mut self) -> &mut AbstractGraph {
        &mut self.graph
    }

    pub fn table(&self) -> &HeuristicTable {
        &self.table
    }

    /// Installs `table`, returning the previous one.
    pub fn swap_table(&mut self, table: HeuristicTable) -> Result<HeuristicTable> {
        if table.state_count() != self.abstraction.state_count() {
            return Err(HarpError::InvalidParameter(format!(
                "table covers {} states, abstraction has {}",
                table.state_count(),
                self.abstraction.state_count()
            )));
        }
        Ok(std::mem::replace(&mut self.table, table))
    }

    pub fn plan(&mut self, space: &CSpace, query: &Query, budget: Budget, rng: &mut dyn RngCore) -> Result<PlannerResult> {
        let started = Instant::now();
        query.validate(space)?;
        self.config.validate()?;
        let mut stats = HarpStats::default();
        let all_samples: Vec<Configuration> = self
            .abstraction
            .regions()
            .iter()
            .flat_map(|r| r.samples.iter().cloned())
            .collect();
        if self.abstraction.state_count() == 0 {
            if !self.config.uniform_fallback {
                return Ok(finish(None, vec![], stats, started));
            }
            stats.fallback = true;
            let outcome = self.refine(space, query, budget, vec![], vec![], None, rng)?;
            absorb(&mut stats, &outcome.stats);
            return Ok(finish(outcome.trajectory, vec![], stats, started));
        }

        let mut probe_rng = ChaCha8Rng::seed_from_u64(rng.next_u64());
        let mut hl_rng = ChaCha8Rng::seed_from_u64(rng.next_u64());
        let mut ll_rng = ChaCha8Rng::seed_from_u64(rng.next_u64());
        let s0 = self.abstraction.abstract_state_of(space, &query.start)?;
        let sg = self.abstraction.abstract_state_of(space, &query.goal)?;
        let plans = loop {
            let plans = {
                let mut graph = AbstractSearchGraph {
                    graph: &mut self.graph,
                    abstraction: &self.abstraction,
                    space,
                    rng: &mut probe_rng,
                };
                let mut dist = AbstractionDistance {
                    abstraction: &self.abstraction,
                    space,
                };
                ms_bidirectional_beam_search(&mut graph, &mut self.table, &mut dist, s0, sg, &self.config.beam, &mut hl_rng)?
            };
            let out_of_time = budget
                .max_seconds
                .is_some_and(|s| started.elapsed().as_secs_f64() >= s);
            if plans.iter().any(|p| p.starts_at(s0)) || self.graph.probes() >= self.config.max_probes || out_of_time {
                break plans;
            }
            self.graph.escalate();
        };
        stats.hl_plans = plans.len();
        stats.rooted_plans = plans.iter().filter(|p| p.starts_at(s0)).count();
        if plans.is_empty() && !self.config.uniform_fallback {
            return Ok(finish(None, plans, stats, started));
        }
        let mut candidate: Vec<StateId> = plans.iter().flat_map(|p| p.states.iter().copied()).collect();
        candidate.sort_unstable();
        candidate.dedup();
        stats.fallback = candidate.is_empty();
        let seed_pool: Vec<Configuration> = candidate
            .iter()
            .flat_map(|&s| self.abstraction.region(s).samples.iter().cloned())
            .collect();
        let expansion_pool = if candidate.is_empty() { vec![] } else { all_samples };

        let mut trajectory = None;
        let holonomic = space.robot().is_holonomic();
        let confine = holonomic
            && self.config.confined_fraction > 0.0
            && candidate.contains(&s0)
            && candidate.contains(&sg);
        if confine {
            let mut member = vec![false; self.abstraction.state_count()];
            for &s in &candidate {
                member[s] = true;
            }
            let phase = budget
                .remaining(started.elapsed().as_secs_f64(), 0)
                .scaled(self.config.confined_fraction);
            let outcome = self.refine(
                space,
                query,
                phase,
                seed_pool.clone(),
                expansion_pool.clone(),
                Some(&member),
                &mut ll_rng,
            )?;
            absorb(&mut stats, &outcome.stats);
            trajectory = outcome.trajectory;
            stats.confined_success = trajectory.is_some();
        }
        if trajectory.is_none() {
            let rest = budget.remaining(started.elapsed().as_secs_f64(), stats.samples);
            let outcome = self.refine(space, query, rest, seed_pool, expansion_pool, None, &mut ll_rng)?;
            absorb(&mut stats, &outcome.stats);
            trajectory = outcome.trajectory;
        }
        stats.candidate_states = candidate;
        Ok(finish(trajectory, plans, stats, started))
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &self,
        space: &CSpace,
        query: &Query,
        budget: Budget,
        seed_pool: Vec<Configuration>,
        expansion_pool: Vec<Configuration>,
        confine_to: Option<&[bool]>,
        rng: &mut dyn RngCore,
    ) -> Result<PlanOutcome> {
        if budget.max_samples == Some(0) || budget.max_seconds.is_some_and(|s| s <= 0.0) {
            return Ok(PlanOutcome {
                trajectory: None,
                stats: PlanStats::default(),
            });
        }
        if !space.robot().is_holonomic() {
            let mut rrt = Rrt::new(self.config.planner);
            rrt.pool = seed_pool;
            rrt.pool_fraction = self.config.cr_fraction;
            return rrt.plan(space, query, budget, rng);
        }
        let llp = Llp::new(self.config.llp(seed_pool, expansion_pool));
        match confine_to {
            None => llp.plan(space, query, budget, rng),
            Some(member) => {
                let abs = &self.abstraction;
                let llp = llp.with_filter(move |x| abs.state_of(space, x).is_some_and(|s| member[s]));
                llp.plan(space, query, budget, rng)
            }
        }
    }

    /// Plans and, on success, revalidates the trajectory and halves `ε` along
    /// its abstract trajectory.
    pub fn solve(&mut self, space: &CSpace, query: &Query, budget: Budget, rng: &mut dyn RngCore) -> Result<PlannerResult> {
        let mut result = self.plan(space, query, budget, rng)?;
        if let Some(t) = &result.trajectory {
            if !t.solves(space, &query.start, &query.goal, space.default_step()) {
                result.trajectory = None;
                result.stats.success = false;
                return Ok(result);
            }
            if self.abstraction.state_count() > 0 {
                let tau = self.abstraction.abstract_trajectory(space, t, space.default_step())?;
                update_heuristic(&mut self.table, &tau);
                result.stats.abstract_trajectory = tau;
            }
        }
        Ok(result)
    }
}

fn absorb(stats: &mut HarpStats, s: &PlanStats) {
    stats.samples += s.samples;
    stats.collision_checks += s.collision_checks;
    stats.nodes += s.nodes;
}

fn finish(trajectory: Option<Trajectory>, plans: Vec<HighLevelPlan>, mut stats: HarpStats, started: Instant) -> PlannerResult {
    stats.success = trajectory.is_some();
    stats.wall_seconds = started.elapsed().as_secs_f64();
    PlannerResult {
        trajectory,
        plans,
        stats,
    }
}

/// One-shot planning against `table`, which receives the heuristic update.
pub fn harp_plan(
    space: &CSpace,
    regions: &[CriticalRegion],
    table: &mut HeuristicTable,
    config: &HarpConfig,
    query: &Query,
    budget: Budget,
    rng: &mut dyn RngCore,
) -> Result<PlannerResult> {
    let mut session = HarpSession::new(space, regions.to_vec(), config.clone())?;
    session.swap_table(std::mem::take(table))?;
    let result = session.solve(space, query, budget, rng);
    *table = session.table;
    result
}

/// HARP behind the common planner interface; every call starts from a fresh
/// heuristic table.
pub struct HarpPlanner {
    pub regions: Vec<CriticalRegion>,
    pub config: HarpConfig,
}

impl MotionPlanner for HarpPlanner {
    fn name(&self) -> &'static str {
        "harp"
    }

    fn plan(&self, space: &CSpace, query: &Query, budget: Budget, rng: &mut dyn RngCore) -> Result<PlanOutcome> {
        let mut table = HeuristicTable::new(self.regions.len());
        let r = harp_plan(space, &self.regions, &mut table, &self.config, query, budget, rng)?;
        Ok(PlanOutcome {
            trajectory: r.trajectory,
            stats: PlanStats {
                samples: r.stats.samples,
                collision_checks: r.stats.collision_checks,
                nodes: r.stats.nodes,
                elapsed_seconds: r.stats.wall_seconds,
            },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepeatSpec {
    pub repetitions: usize,
    /// One table for all problems instead of one per problem.
    pub shared_table: bool,
    pub budget: Budget,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub iteration: usize,
    pub problem: usize,
    pub success: bool,
    pub seconds: f64,
    pub samples: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub successes: usize,
    pub attempts: usize,
    pub mean_seconds: f64,
    pub mean_samples: f64,
    /// Table entries after the iteration; one list per table.
    pub eps: Vec<Vec<(StateId, StateId, f64)>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RepeatedRun {
    pub iterations: Vec<IterationRecord>,
    pub records: Vec<QueryRecord>,
}

impl RepeatedRun {
    pub fn mean_seconds(&self) -> Vec<f64> {
        self.iterations.iter().map(|i| i.mean_seconds).collect()
    }

    /// Per-query times in solve order.
    pub fn query_seconds(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.seconds).collect()
    }
}

/// Solves every problem `repetitions` times, iteration-major, keeping either
/// one heuristic table per problem or a single shared one. The session's
/// neighbor verdicts carry over between all solves.
pub fn solve_repeated(session: &mut HarpSession, space: &CSpace, problems: &[Query], spec: &RepeatSpec) -> Result<RepeatedRun> {
    let n = session.abstraction.state_count();
    let mut tables: Vec<HeuristicTable> = if spec.shared_table {
        vec![session.table.clone()]
    } else {
        vec![session.table.clone(); problems.len()]
    };
    let mut run = RepeatedRun::default();
    for iteration in 0..spec.repetitions {
        let mut record = IterationRecord {
            iteration: iteration + 1,
            successes: 0,
            attempts: problems.len(),
            mean_seconds: 0.0,
            mean_samples: 0.0,
            eps: Vec::new(),
        };
        for (p, query) in problems.iter().enumerate() {
            let slot = if spec.shared_table { 0 } else { p };
            let table = std::mem::replace(&mut tables[slot], HeuristicTable::new(n));
            session.swap_table(table)?;
            let mut rng = rng_for(spec.seed, &[p as u64]);
            let result = session.solve(space, query, spec.budget, &mut rng)?;
            tables[slot] = session.swap_table(HeuristicTable::new(n))?;
            record.successes += result.stats.success as usize;
            record.mean_seconds += result.stats.wall_seconds;
            record.mean_samples += result.stats.samples as f64;
            run.records.push(QueryRecord {
                iteration: iteration + 1,
                problem: p,
                success: result.stats.success,
                seconds: result.stats.wall_seconds,
                samples: result.stats.samples,
            });
        }
        if !problems.is_empty() {
            record.mean_seconds /= problems.len() as f64;
            record.mean_samples /= problems.len() as f64;
        }
        record.eps = tables.iter().map(|t| t.entries()).collect();
        run.iterations.push(record);
    }
    if spec.shared_table {
        session.swap_table(tables.pop().expect("one shared table"))?;
    }
    Ok(run)
}

/// Trailing moving average; early entries average what is available.
pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let w = window.max(1);
    let mut sum = 0.0;
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            sum += v;
            if i >= w {
                sum -= values[i - w];
            }
            sum / (i + 1).min(w) as f64
        })
        .collect()
}
