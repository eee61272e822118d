//! Experiment harness: success rate against planning budget, and planning
//! time across repeated solves with a learned heuristic.

mod lattice;

use std::path::{Path, PathBuf};

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::critical_regions::{
    estimate_criticality, extract_regions, generate_corpus, CriticalRegion, ExtractParams, FieldBins, RegionSet,
};
use crate::cspace::{io, CSpace, Query, RobotModel, RobotSpec};
use crate::envs::EnvSpec;
use crate::error::{HarpError, Result};
use crate::harp::{moving_average, solve_repeated, HarpConfig, HarpSession, RepeatSpec, RepeatedRun};
use crate::hl_search::HeuristicTable;
use crate::ll_planner::{baseline, BiRrt, Budget, MotionPlanner, PlannerKind, Rrt};
use crate::seeding::rng_for;

pub use lattice::{generate_queries, Lattice};

/// Pair tries per query before a slot is skipped.
const QUERY_TRIES: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnvSource {
    File {
        path: PathBuf,
        #[serde(default)]
        resolution: Option<f64>,
    },
    Generated(EnvSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvEntry {
    pub name: String,
    pub source: EnvSource,
}

impl EnvEntry {
    pub fn load(&self, robot: &RobotModel, base_dir: &Path) -> Result<CSpace> {
        let ws = match &self.source {
            EnvSource::File { path, resolution } => io::load_workspace(&base_dir.join(path), *resolution)?,
            EnvSource::Generated(spec) => spec.build()?,
        };
        Ok(CSpace::new(ws, robot.clone()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetUnit {
    Seconds,
    Samples,
}

impl BudgetUnit {
    pub fn budget(&self, value: f64) -> Budget {
        match self {
            BudgetUnit::Seconds => Budget::seconds(value),
            BudgetUnit::Samples => Budget::samples(value.round() as u64),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BudgetUnit::Seconds => "seconds",
            BudgetUnit::Samples => "samples",
        }
    }
}

/// How HARP obtains critical regions for an environment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegionRecipe {
    /// Pre-computed region set; relative to the spec file.
    pub file: Option<PathBuf>,
    pub corpus_goals: usize,
    pub corpus_starts: usize,
    pub corpus_samples: u64,
    pub cell_factor: usize,
    pub extract: ExtractParams,
}

impl Default for RegionRecipe {
    fn default() -> Self {
        RegionRecipe {
            file: None,
            corpus_goals: 50,
            corpus_starts: 2,
            corpus_samples: 100_000,
            cell_factor: 4,
            extract: ExtractParams::default(),
        }
    }
}

impl RegionRecipe {
    /// Loads or estimates regions from a corpus of demonstration plans.
    pub fn regions(&self, space: &CSpace, env_name: &str, base_dir: &Path, rng: &mut dyn RngCore) -> Result<Vec<CriticalRegion>> {
        if let Some(file) = &self.file {
            return Ok(RegionSet::load(&base_dir.join(file))?.regions);
        }
        let demo: Box<dyn MotionPlanner> = if space.robot().is_holonomic() {
            Box::new(BiRrt::default())
        } else {
            Box::new(Rrt::default())
        };
        let corpus = generate_corpus(
            space,
            env_name,
            self.corpus_goals,
            self.corpus_starts,
            demo.as_ref(),
            Budget::samples(self.corpus_samples),
            rng,
        )?;
        let field = estimate_criticality(
            &corpus,
            space,
            &FieldBins::with_factor(space, self.cell_factor),
            space.default_step(),
        )?;
        extract_regions(&field, space, &self.extract, rng)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub environments: Vec<EnvEntry>,
    pub robot: RobotSpec,
    pub planners: Vec<PlannerKind>,
    /// Queries per (environment, budget) point.
    pub queries: usize,
    pub budget_unit: BudgetUnit,
    pub budgets: Vec<f64>,
    pub seed: u64,
    #[serde(default)]
    pub regions: RegionRecipe,
    #[serde(default)]
    pub harp: HarpConfig,
    /// Probe every neighbor pair before the timed queries.
    #[serde(default = "yes")]
    pub warm_neighbors: bool,
}

fn yes() -> bool {
    true
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(HarpError::InvalidParameter(m.into()));
        if self.environments.is_empty() || self.planners.is_empty() {
            return bad("need at least one environment and one planner");
        }
        if self.queries == 0 {
            return bad("query count must be >= 1");
        }
        if self.budgets.is_empty() || self.budgets.iter().any(|b| !(*b > 0.0)) {
            return bad("budgets must be positive");
        }
        if self.budgets.windows(2).any(|w| w[0] >= w[1]) {
            return bad("budgets must be strictly increasing");
        }
        self.harp.validate()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let spec: ExperimentSpec = serde_json::from_slice(&io::read_bytes(path)?)?;
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub planner: String,
    pub environment: String,
    pub budget: f64,
    pub budget_unit: String,
    pub queries: usize,
    pub solved: usize,
    pub solved_fraction: f64,
    /// Omitted for sample budgets so reruns compare byte for byte.
    pub mean_seconds: Option<f64>,
    pub mean_samples: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
    /// Query slots dropped because no certified query was found.
    pub skipped_queries: usize,
}

impl ResultTable {
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record([
                "planner",
                "environment",
                "budget",
                "budget_unit",
                "queries",
                "solved",
                "solved_fraction",
                "mean_seconds",
                "mean_samples",
                "seed",
            ])?;
        }
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.into_inner()
            .map_err(|e| HarpError::Io {
                path: PathBuf::from("<csv buffer>"),
                source: e.into_error(),
            })
    }

    pub fn from_csv(bytes: &[u8]) -> Result<Self> {
        let mut r = csv::Reader::from_reader(bytes);
        let rows = r.deserialize().collect::<std::result::Result<Vec<ResultRow>, _>>()?;
        Ok(ResultTable {
            rows,
            skipped_queries: 0,
        })
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        Ok(serde_json::to_vec_pretty(self)?)
    }

    /// Writes `<stem>.csv` and `<stem>.json`.
    pub fn emit(&self, stem: &Path) -> Result<(PathBuf, PathBuf)> {
        let csv_path = stem.with_extension("csv");
        let json_path = stem.with_extension("json");
        io::write_bytes(&csv_path, &self.to_csv()?)?;
        io::write_bytes(&json_path, &self.to_json()?)?;
        Ok((csv_path, json_path))
    }

    pub fn fraction(&self, planner: PlannerKind, environment: &str, budget: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.planner == planner.name() && r.environment == environment && r.budget == budget)
            .map(|r| r.solved_fraction)
    }
}

struct EnvSetup {
    name: String,
    space: CSpace,
    regions: Vec<CriticalRegion>,
    /// Per budget point.
    queries: Vec<Vec<Query>>,
    skipped: usize,
}

fn setup_env(spec: &ExperimentSpec, e: usize, base_dir: &Path) -> Result<EnvSetup> {
    let entry = &spec.environments[e];
    let robot = RobotModel::from_spec(&spec.robot)?;
    let space = entry.load(&robot, base_dir)?;
    let regions = if spec.planners.contains(&PlannerKind::Harp) {
        let mut rng = rng_for(spec.seed, &[e as u64, u64::MAX]);
        spec.regions.regions(&space, &entry.name, base_dir, &mut rng)?
    } else {
        Vec::new()
    };
    let lattice = robot.is_holonomic().then(|| Lattice::build(&space, 8));
    let mut queries = Vec::new();
    let mut skipped = 0;
    for b in 0..spec.budgets.len() {
        let mut rng = rng_for(spec.seed, &[e as u64, b as u64, u64::MAX - 1]);
        let (qs, s) = generate_queries(&space, lattice.as_ref(), spec.queries, QUERY_TRIES, &mut rng);
        queries.push(qs);
        skipped += s;
    }
    Ok(EnvSetup {
        name: entry.name.clone(),
        space,
        regions,
        queries,
        skipped,
    })
}

struct Outcome {
    solved: usize,
    seconds: f64,
    samples: u64,
}

fn run_job(spec: &ExperimentSpec, env: &EnvSetup, e: usize, planner: PlannerKind, b: usize) -> Result<Outcome> {
    let budget = spec.budget_unit.budget(spec.budgets[b]);
    let space = &env.space;
    let p_index = PlannerKind::all().iter().position(|k| *k == planner).expect("known planner") as u64;
    let mut session = match planner {
        PlannerKind::Harp => {
            let mut s = HarpSession::new(space, env.regions.clone(), spec.harp.clone())?;
            if spec.warm_neighbors {
                let mut rng = rng_for(spec.seed, &[e as u64, b as u64, p_index, u64::MAX - 2]);
                warm_neighbors(&mut s, space, &mut rng)?;
            }
            Some(s)
        }
        _ => None,
    };
    let other = match planner {
        PlannerKind::Harp => None,
        k => Some(baseline(k)?),
    };
    let mut out = Outcome {
        solved: 0,
        seconds: 0.0,
        samples: 0,
    };
    for (q, query) in env.queries[b].iter().enumerate() {
        let mut rng = rng_for(spec.seed, &[e as u64, b as u64, q as u64, p_index]);
        let (traj, secs, samples) = match (&mut session, &other) {
            (Some(s), _) => {
                s.swap_table(HeuristicTable::new(env.regions.len()))?;
                let r = s.solve(space, query, budget, &mut rng)?;
                (r.trajectory, r.stats.wall_seconds, r.stats.samples)
            }
            (None, Some(p)) => {
                let r = p.plan(space, query, budget, &mut rng)?;
                (r.trajectory, r.stats.elapsed_seconds, r.stats.samples)
            }
            (None, None) => unreachable!("planner is either harp or a baseline"),
        };
        // successes only count when they revalidate
        if traj.is_some_and(|t| t.solves(space, &query.start, &query.goal, space.default_step())) {
            out.solved += 1;
        }
        out.seconds += secs;
        out.samples += samples;
    }
    Ok(out)
}

/// Probes every unordered state pair once.
pub fn warm_neighbors(session: &mut HarpSession, space: &CSpace, rng: &mut dyn RngCore) -> Result<()> {
    let abs = session.abstraction().clone();
    let n = abs.state_count();
    for i in 0..n {
        for j in i + 1..n {
            session.graph_mut().are_neighbors(&abs, space, i, j, rng)?;
        }
    }
    Ok(())
}

/// Solved fraction for every (environment, planner, budget). All planners
/// see the same certified queries at a given budget point. `jobs` sets the
/// worker count (0 for the rayon default).
pub fn run_success_curve(spec: &ExperimentSpec, base_dir: &Path, jobs: usize) -> Result<ResultTable> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarpError::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| {
        let mut table = ResultTable::default();
        for e in 0..spec.environments.len() {
            let env = setup_env(spec, e, base_dir)?;
            table.skipped_queries += env.skipped;
            let tasks: Vec<(PlannerKind, usize)> = spec
                .planners
                .iter()
                .flat_map(|&p| (0..spec.budgets.len()).map(move |b| (p, b)))
                .collect();
            let outcomes: Vec<Outcome> = tasks
                .par_iter()
                .map(|&(p, b)| run_job(spec, &env, e, p, b))
                .collect::<Result<_>>()?;
            for (&(p, b), o) in tasks.iter().zip(outcomes) {
                let n = env.queries[b].len();
                let denom = n.max(1) as f64;
                table.rows.push(ResultRow {
                    planner: p.name().into(),
                    environment: env.name.clone(),
                    budget: spec.budgets[b],
                    budget_unit: spec.budget_unit.name().into(),
                    queries: n,
                    solved: o.solved,
                    solved_fraction: o.solved as f64 / denom,
                    mean_seconds: (spec.budget_unit == BudgetUnit::Seconds).then_some(o.seconds / denom),
                    mean_samples: o.samples as f64 / denom,
                    seed: spec.seed,
                });
            }
        }
        Ok(table)
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicSpec {
    pub environment: EnvEntry,
    pub robot: RobotSpec,
    pub problems: usize,
    pub repetitions: usize,
    pub budget_unit: BudgetUnit,
    pub budget: f64,
    pub seed: u64,
    #[serde(default)]
    pub regions: RegionRecipe,
    #[serde(default)]
    pub harp: HarpConfig,
    /// Run the per-problem and the shared-table modes.
    #[serde(default = "both_modes")]
    pub modes: Vec<TableMode>,
    #[serde(default = "default_window")]
    pub window: usize,
}

fn both_modes() -> Vec<TableMode> {
    vec![TableMode::PerProblem, TableMode::Shared]
}

fn default_window() -> usize {
    10
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableMode {
    PerProblem,
    Shared,
}

impl TableMode {
    pub fn name(&self) -> &'static str {
        match self {
            TableMode::PerProblem => "per_problem",
            TableMode::Shared => "shared",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeuristicRow {
    pub mode: String,
    pub iteration: usize,
    pub successes: usize,
    pub attempts: usize,
    pub mean_seconds: Option<f64>,
    pub mean_samples: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HeuristicCurve {
    pub rows: Vec<HeuristicRow>,
    /// Per mode: trailing moving average of per-query solve times.
    pub moving_average: Vec<(String, Vec<f64>)>,
    pub runs: Vec<(String, RepeatedRun)>,
}

impl HeuristicCurve {
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record(["mode", "iteration", "successes", "attempts", "mean_seconds", "mean_samples"])?;
        }
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.into_inner().map_err(|e| HarpError::Io {
            path: PathBuf::from("<csv buffer>"),
            source: e.into_error(),
        })
    }

    pub fn emit(&self, stem: &Path) -> Result<(PathBuf, PathBuf)> {
        let csv_path = stem.with_extension("csv");
        let json_path = stem.with_extension("json");
        io::write_bytes(&csv_path, &self.to_csv()?)?;
        io::write_bytes(&json_path, &serde_json::to_vec_pretty(self)?)?;
        Ok((csv_path, json_path))
    }
}

/// Repeated solves of the same random problems while the heuristic learns,
/// once per table mode.
pub fn run_heuristic_curve(spec: &HeuristicSpec, base_dir: &Path) -> Result<HeuristicCurve> {
    if spec.problems == 0 || !(spec.budget > 0.0) {
        return Err(HarpError::InvalidParameter("need problems >= 1 and a positive budget".into()));
    }
    spec.harp.validate()?;
    let robot = RobotModel::from_spec(&spec.robot)?;
    let space = spec.environment.load(&robot, base_dir)?;
    let mut rng = rng_for(spec.seed, &[u64::MAX]);
    let regions = spec.regions.regions(&space, &spec.environment.name, base_dir, &mut rng)?;
    let lattice = robot.is_holonomic().then(|| Lattice::build(&space, 8));
    let mut qrng = rng_for(spec.seed, &[u64::MAX - 1]);
    let (problems, _) = generate_queries(&space, lattice.as_ref(), spec.problems, QUERY_TRIES, &mut qrng);
    let timed = spec.budget_unit == BudgetUnit::Seconds;
    let mut curve = HeuristicCurve::default();
    for mode in &spec.modes {
        let mut session = HarpSession::new(&space, regions.clone(), spec.harp.clone())?;
        let repeat = RepeatSpec {
            repetitions: spec.repetitions,
            shared_table: *mode == TableMode::Shared,
            budget: spec.budget_unit.budget(spec.budget),
            seed: spec.seed,
        };
        let run = solve_repeated(&mut session, &space, &problems, &repeat)?;
        for it in &run.iterations {
            curve.rows.push(HeuristicRow {
                mode: mode.name().into(),
                iteration: it.iteration,
                successes: it.successes,
                attempts: it.attempts,
                mean_seconds: timed.then_some(it.mean_seconds),
                mean_samples: it.mean_samples,
            });
        }
        curve
            .moving_average
            .push((mode.name().into(), moving_average(&run.query_seconds(), spec.window)));
        curve.runs.push((mode.name().into(), run));
    }
    Ok(curve)
}
