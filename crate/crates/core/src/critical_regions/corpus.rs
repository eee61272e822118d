use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::cspace::{io, CSpace, Configuration, Query, Trajectory};
use crate::error::{HarpError, Result};
use crate::ll_planner::{Budget, MotionPlanner};

/// Tries per free-configuration draw when sampling query endpoints.
const ENDPOINT_TRIES: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct DemoPlan {
    pub query: Query,
    pub trajectory: Trajectory,
}

/// Solved demonstration plans for one environment.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanCorpus {
    pub environment: String,
    pub plans: Vec<DemoPlan>,
    pub attempted: usize,
    pub skipped: usize,
}

#[derive(Serialize, Deserialize)]
struct Header {
    environment: String,
    attempted: usize,
    skipped: usize,
}

#[derive(Serialize, Deserialize)]
struct Record {
    start: Configuration,
    goal: Configuration,
    waypoints: Vec<Configuration>,
}

impl PlanCorpus {
    /// JSON lines: a header object, then one `{start, goal, waypoints}` per plan.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        let header = Header {
            environment: self.environment.clone(),
            attempted: self.attempted,
            skipped: self.skipped,
        };
        serde_json::to_writer(&mut buf, &header)?;
        buf.push(b'\n');
        for p in &self.plans {
            let rec = Record {
                start: p.query.start.clone(),
                goal: p.query.goal.clone(),
                waypoints: p.trajectory.waypoints().to_vec(),
            };
            serde_json::to_writer(&mut buf, &rec)?;
            buf.write_all(b"\n").expect("writing to a Vec cannot fail");
        }
        io::write_bytes(path, &buf)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| HarpError::io(path, e))?;
        let ctx = path.display().to_string();
        let mut lines = BufReader::new(file).lines();
        let first = lines
            .next()
            .ok_or_else(|| HarpError::parse(&ctx, "missing header"))?
            .map_err(|e| HarpError::io(path, e))?;
        let header: Header = serde_json::from_str(&first)?;
        let mut plans = Vec::new();
        for line in lines {
            let line = line.map_err(|e| HarpError::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(&line)?;
            plans.push(DemoPlan {
                query: Query::new(rec.start, rec.goal),
                trajectory: Trajectory::new(rec.waypoints)?,
            });
        }
        Ok(PlanCorpus {
            environment: header.environment,
            plans,
            attempted: header.attempted,
            skipped: header.skipped,
        })
    }
}

fn sample_endpoint(space: &CSpace, rng: &mut dyn RngCore) -> Result<Configuration> {
    space
        .sample_free(rng, ENDPOINT_TRIES)
        .ok_or_else(|| HarpError::InvalidWorkspace("no free configuration found".into()))
}

/// Solves `n_goals * n_starts` random queries with `planner`, keeping every
/// plan that actually connects its endpoints without collision.
#[allow(clippy::too_many_arguments)]
pub fn generate_corpus(
    space: &CSpace,
    environment: &str,
    n_goals: usize,
    n_starts: usize,
    planner: &dyn MotionPlanner,
    budget: Budget,
    rng: &mut dyn RngCore,
) -> Result<PlanCorpus> {
    let goals = (0..n_goals)
        .map(|_| sample_endpoint(space, rng))
        .collect::<Result<Vec<_>>>()?;
    generate_corpus_for_goals(space, environment, &goals, n_starts, planner, budget, rng)
}

/// Like [`generate_corpus`] with the goals given.
pub fn generate_corpus_for_goals(
    space: &CSpace,
    environment: &str,
    goals: &[Configuration],
    n_starts: usize,
    planner: &dyn MotionPlanner,
    budget: Budget,
    rng: &mut dyn RngCore,
) -> Result<PlanCorpus> {
    let step = space.default_step();
    let mut plans = Vec::new();
    let mut attempted = 0;
    for goal in goals {
        for _ in 0..n_starts {
            attempted += 1;
            let start = sample_endpoint(space, rng)?;
            let query = Query::new(start, goal.clone());
            let outcome = planner.plan(space, &query, budget, rng)?;
            if let Some(t) = outcome.trajectory {
                if t.solves(space, &query.start, &query.goal, step) {
                    plans.push(DemoPlan { query, trajectory: t });
                }
            }
        }
    }
    let skipped = attempted - plans.len();
    Ok(PlanCorpus {
        environment: environment.to_string(),
        plans,
        attempted,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cspace::{RobotModel, Workspace};
    use crate::ll_planner::BiRrt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corpus_round_trips_through_json_lines() {
        let space = CSpace::new(Workspace::free(20, 20, 0.1).unwrap(), RobotModel::point());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let corpus =
            generate_corpus(&space, "open", 2, 3, &BiRrt::default(), Budget::samples(2000), &mut rng).unwrap();
        assert_eq!(corpus.attempted, 6);
        assert_eq!(corpus.plans.len() + corpus.skipped, 6);
        assert!(!corpus.plans.is_empty());
        for p in &corpus.plans {
            assert!(p.trajectory.solves(&space, &p.query.start, &p.query.goal, space.default_step()));
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        corpus.save(&path).unwrap();
        assert_eq!(PlanCorpus::load(&path).unwrap(), corpus);
    }
}
