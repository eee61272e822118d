use std::collections::HashMap;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::Abstraction;
use crate::cspace::CSpace;
use crate::error::{HarpError, Result};

pub const DEFAULT_PROBES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Unknown,
    Neighbor,
    /// No witness found among `probes` sampled pairs.
    NotNeighbor { probes: usize },
}

/// Lazily verified neighbor relation over abstract states. Verdicts are
/// stored per unordered pair; positive verdicts are final, negative ones are
/// re-probed once the probe budget grows past the budget they were found with.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbstractGraph {
    states: usize,
    probes: usize,
    #[serde(with = "pair_map")]
    verdicts: HashMap<(usize, usize), Verdict>,
}

fn key(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

impl AbstractGraph {
    pub fn new(states: usize) -> Self {
        Self::with_probes(states, DEFAULT_PROBES)
    }

    pub fn with_probes(states: usize, probes: usize) -> Self {
        AbstractGraph {
            states,
            probes: probes.max(1),
            verdicts: HashMap::new(),
        }
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn probes(&self) -> usize {
        self.probes
    }

    /// Doubles the probe budget so that negative verdicts get revisited.
    pub fn escalate(&mut self) {
        self.probes = self.probes.saturating_mul(2);
    }

    pub fn verdict(&self, i: usize, j: usize) -> Verdict {
        self.verdicts.get(&key(i, j)).copied().unwrap_or(Verdict::Unknown)
    }

    fn check_state(&self, s: usize) -> Result<()> {
        if s < self.states {
            Ok(())
        } else {
            Err(HarpError::UnknownState(s))
        }
    }

    /// Verified neighbor pairs `(i, j)` with `i < j`, sorted.
    pub fn actions(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .verdicts
            .iter()
            .filter(|(_, v)| **v == Verdict::Neighbor)
            .map(|(k, _)| *k)
            .collect();
        out.sort_unstable();
        out
    }

    /// Probabilistic adjacency: true iff some sampled pair of region samples
    /// is joined by a collision-free segment whose interpolants all classify
    /// into `{i, j}`.
    pub fn are_neighbors(
        &mut self,
        abs: &Abstraction,
        space: &CSpace,
        i: usize,
        j: usize,
        rng: &mut dyn RngCore,
    ) -> Result<bool> {
        self.check_state(i)?;
        self.check_state(j)?;
        if i == j {
            return Err(HarpError::InvalidParameter(format!("state {i} paired with itself")));
        }
        match self.verdict(i, j) {
            Verdict::Neighbor => return Ok(true),
            Verdict::NotNeighbor { probes } if probes >= self.probes => return Ok(false),
            _ => {}
        }
        let (found, exhaustive) = probe(abs, space, i, j, self.probes, rng);
        let v = match (found, exhaustive) {
            (true, _) => Verdict::Neighbor,
            // every pair was tried; more budget cannot change the answer
            (false, true) => Verdict::NotNeighbor { probes: usize::MAX },
            (false, false) => Verdict::NotNeighbor { probes: self.probes },
        };
        self.verdicts.insert(key(i, j), v);
        Ok(found)
    }

    /// Verified neighbors of `i` in increasing id order.
    pub fn neighbors(&mut self, abs: &Abstraction, space: &CSpace, i: usize, rng: &mut dyn RngCore) -> Result<Vec<usize>> {
        self.check_state(i)?;
        let mut out = Vec::new();
        for j in 0..self.states {
            if j != i && self.are_neighbors(abs, space, i, j, rng)? {
                out.push(j);
            }
        }
        Ok(out)
    }
}

/// Returns whether a witness was found and whether all sample pairs were tried.
fn probe(abs: &Abstraction, space: &CSpace, i: usize, j: usize, budget: usize, rng: &mut dyn RngCore) -> (bool, bool) {
    let ri = &abs.region(i).samples;
    let rj = &abs.region(j).samples;
    let step = space.default_step();
    let accept = |x: &[f64]| matches!(abs.state_of(space, x), Some(s) if s == i || s == j);
    if ri.len() * rj.len() <= budget {
        let found = ri
            .iter()
            .any(|a| rj.iter().any(|b| space.segment_free_with(&a.0, &b.0, step, accept)));
        return (found, true);
    }
    let found = (0..budget).any(|_| {
        let a = &ri[rng.gen_range(0..ri.len())];
        let b = &rj[rng.gen_range(0..rj.len())];
        space.segment_free_with(&a.0, &b.0, step, accept)
    });
    (found, false)
}

mod pair_map {
    use std::collections::HashMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Verdict;

    pub fn serialize<S: Serializer>(map: &HashMap<(usize, usize), Verdict>, s: S) -> Result<S::Ok, S::Error> {
        let mut entries: Vec<_> = map.iter().map(|(k, v)| (k.0, k.1, *v)).collect();
        entries.sort_by_key(|e| (e.0, e.1));
        entries.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<HashMap<(usize, usize), Verdict>, D::Error> {
        let entries: Vec<(usize, usize, Verdict)> = Vec::deserialize(d)?;
        Ok(entries.into_iter().map(|(i, j, v)| ((i, j), v)).collect())
    }
}
