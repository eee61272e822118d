//! High-level search over abstract states.
//!
//! [`ms_bidirectional_beam_search`] seeds its fringe with the initial state,
//! the goal state and a few random states, keeps the best `w` nodes per round
//! by `f = g + h` and collects every branch that reaches the goal.
//! [`beam_search`] is the plain single-source variant. Both rank nodes with
//! the ε-weighted region-distance heuristic held in a [`HeuristicTable`].

use std::collections::HashMap;
use std::path::Path;

use rand::seq::index::sample;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::abstraction::{d_r, AbstractGraph, Abstraction, StateId};
use crate::cspace::{io, CSpace};
use crate::error::{HarpError, Result};

/// Successor relation searched by the beam searches.
pub trait SearchGraph {
    fn state_count(&self) -> usize;
    fn successors(&mut self, s: StateId) -> Result<Vec<StateId>>;
}

/// Explicit adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdjacencyList(pub Vec<Vec<StateId>>);

impl SearchGraph for AdjacencyList {
    fn state_count(&self) -> usize {
        self.0.len()
    }

    fn successors(&mut self, s: StateId) -> Result<Vec<StateId>> {
        self.0.get(s).cloned().ok_or(HarpError::UnknownState(s))
    }
}

/// The lazily probed neighbor relation of an abstraction.
pub struct AbstractSearchGraph<'a> {
    pub graph: &'a mut AbstractGraph,
    pub abstraction: &'a Abstraction,
    pub space: &'a CSpace,
    pub rng: &'a mut dyn RngCore,
}

impl SearchGraph for AbstractSearchGraph<'_> {
    fn state_count(&self) -> usize {
        self.graph.state_count()
    }

    fn successors(&mut self, s: StateId) -> Result<Vec<StateId>> {
        self.graph.neighbors(self.abstraction, self.space, s, self.rng)
    }
}

/// `d^r` between the regions of two states.
pub trait RegionDistance {
    fn region_distance(&mut self, i: StateId, j: StateId) -> Result<f64>;
}

pub struct AbstractionDistance<'a> {
    pub abstraction: &'a Abstraction,
    pub space: &'a CSpace,
}

impl RegionDistance for AbstractionDistance<'_> {
    fn region_distance(&mut self, i: StateId, j: StateId) -> Result<f64> {
        let n = self.abstraction.state_count();
        for s in [i, j] {
            if s >= n {
                return Err(HarpError::UnknownState(s));
            }
        }
        d_r(self.space, self.abstraction.region(i), self.abstraction.region(j))
    }
}

impl<F: FnMut(StateId, StateId) -> f64> RegionDistance for F {
    fn region_distance(&mut self, i: StateId, j: StateId) -> Result<f64> {
        Ok(self(i, j))
    }
}

/// Ordered `ε_ij` coefficients (default 1) plus memoized `d^r` values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HeuristicTable {
    states: usize,
    eps: HashMap<(StateId, StateId), f64>,
    dr: HashMap<(StateId, StateId), f64>,
}

impl HeuristicTable {
    pub fn new(states: usize) -> Self {
        HeuristicTable {
            states,
            eps: HashMap::new(),
            dr: HashMap::new(),
        }
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    fn check(&self, s: StateId) -> Result<()> {
        if s < self.states {
            Ok(())
        } else {
            Err(HarpError::UnknownState(s))
        }
    }

    pub fn eps(&self, i: StateId, j: StateId) -> f64 {
        self.eps.get(&(i, j)).copied().unwrap_or(1.0)
    }

    /// Non-default entries sorted by pair.
    pub fn entries(&self) -> Vec<(StateId, StateId, f64)> {
        let mut out: Vec<_> = self.eps.iter().map(|(k, v)| (k.0, k.1, *v)).collect();
        out.sort_by_key(|e| (e.0, e.1));
        out
    }

    /// True when every `ε` here is at most the matching `ε` in `before`.
    pub fn dominated_by(&self, before: &HeuristicTable) -> bool {
        self.eps.iter().all(|(&(i, j), &v)| v <= before.eps(i, j))
            && before.eps.keys().all(|&(i, j)| self.eps(i, j) <= before.eps(i, j))
    }

    fn dr(&mut self, dist: &mut dyn RegionDistance, i: StateId, j: StateId) -> Result<f64> {
        let key = (i.min(j), i.max(j));
        if let Some(&d) = self.dr.get(&key) {
            return Ok(d);
        }
        let d = dist.region_distance(key.0, key.1)?;
        self.dr.insert(key, d);
        Ok(d)
    }

    /// `h'(s1, s2) = ε_12 · d^r(r1, r2)`.
    pub fn h_prime(&mut self, dist: &mut dyn RegionDistance, s1: StateId, s2: StateId) -> Result<f64> {
        self.check(s1)?;
        self.check(s2)?;
        if s1 == s2 {
            return Ok(0.0);
        }
        Ok(self.eps(s1, s2) * self.dr(dist, s1, s2)?)
    }

    /// `h(n) = h'(s_m, s_n) + min(h'(s_n, s_i), h'(s_n, s_g))`; a node
    /// without parent has `h'(s_m, s_n) = 0`.
    pub fn node_h(
        &mut self,
        dist: &mut dyn RegionDistance,
        parent: Option<StateId>,
        n: StateId,
        s_i: StateId,
        s_g: StateId,
    ) -> Result<f64> {
        let step = match parent {
            Some(m) => self.h_prime(dist, m, n)?,
            None => 0.0,
        };
        let to_i = self.h_prime(dist, n, s_i)?;
        let to_g = self.h_prime(dist, n, s_g)?;
        Ok(step + to_i.min(to_g))
    }

    /// One line `i j eps` per non-default entry.
    pub fn to_text(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(i, j, e)| format!("{i} {j} {e:?}\n"))
            .collect()
    }

    pub fn from_text(states: usize, text: &str) -> Result<Self> {
        let mut table = HeuristicTable::new(states);
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| HarpError::parse(format!("heuristic table line {}", n + 1), m);
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(bad("expected `i j eps`"));
            }
            let i: usize = parts[0].parse().map_err(|_| bad("bad state id"))?;
            let j: usize = parts[1].parse().map_err(|_| bad("bad state id"))?;
            let e: f64 = parts[2].parse().map_err(|_| bad("bad eps"))?;
            if i >= states || j >= states {
                return Err(bad("state id out of range"));
            }
            if !(e > 0.0 && e <= 1.0) {
                return Err(bad("eps outside (0, 1]"));
            }
            table.eps.insert((i, j), e);
        }
        Ok(table)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        io::write_bytes(path, self.to_text().as_bytes())
    }

    pub fn load(path: &Path, states: usize) -> Result<Self> {
        let bytes = io::read_bytes(path)?;
        let text = String::from_utf8(bytes).map_err(|e| HarpError::parse(path.display().to_string(), e.to_string()))?;
        Self::from_text(states, &text)
    }
}

/// Halves `ε_ij` for each consecutive pair `(s_i, s_j)` of `abstract_traj`,
/// never dropping below the smallest positive double.
pub fn update_heuristic(table: &mut HeuristicTable, abstract_traj: &[StateId]) {
    for w in abstract_traj.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let e = table.eps(w[0], w[1]);
        table.eps.insert((w[0], w[1]), (e / 2.0).max(f64::MIN_POSITIVE));
    }
}

/// A candidate abstract plan ending at the goal state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HighLevelPlan {
    /// Visited states, source first, goal last.
    pub states: Vec<StateId>,
    /// Source the search branch started from.
    pub origin: StateId,
}

impl HighLevelPlan {
    /// States before the goal, in order.
    pub fn path(&self) -> &[StateId] {
        &self.states[..self.states.len() - 1]
    }

    /// Number of abstract actions.
    pub fn cost(&self) -> usize {
        self.states.len() - 1
    }

    pub fn starts_at(&self, s: StateId) -> bool {
        self.states.first() == Some(&s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BeamParams {
    pub width: usize,
    pub plans: usize,
    /// Random extra sources; `None` means `min(10, |S|)`.
    pub sources: Option<usize>,
}

impl Default for BeamParams {
    fn default() -> Self {
        BeamParams {
            width: 20,
            plans: 5,
            sources: None,
        }
    }
}

#[derive(Clone, Debug)]
struct Node {
    current: StateId,
    /// States before `current`.
    path: Vec<StateId>,
    g: usize,
    f: f64,
    seq: u64,
}

impl Node {
    fn visits(&self, s: StateId) -> bool {
        s == self.current || self.path.contains(&s)
    }
}

/// Keeps the `w` best nodes by `(f, insertion order)`.
fn top_w(mut fringe: Vec<Node>, w: usize) -> Vec<Node> {
    fringe.sort_by(|a, b| a.f.total_cmp(&b.f).then(a.seq.cmp(&b.seq)));
    fringe.truncate(w);
    fringe
}

fn check_endpoints(n: usize, s0: StateId, sg: StateId) -> Result<()> {
    for s in [s0, sg] {
        if s >= n {
            return Err(HarpError::UnknownState(s));
        }
    }
    Ok(())
}

/// Multi-source beam search collecting up to `params.plans` plans to `sg`.
/// Branches may start at `s0`, at `sg` or at random states; the `sg` branch
/// only explores. If no returned plan starts at `s0`, a full-width beam
/// search from `s0` is appended when one exists.
pub fn ms_bidirectional_beam_search(
    graph: &mut dyn SearchGraph,
    table: &mut HeuristicTable,
    dist: &mut dyn RegionDistance,
    s0: StateId,
    sg: StateId,
    params: &BeamParams,
    rng: &mut dyn RngCore,
) -> Result<Vec<HighLevelPlan>> {
    let n = graph.state_count();
    check_endpoints(n, s0, sg)?;
    if params.width == 0 || params.plans == 0 {
        return Err(HarpError::InvalidParameter("beam width and plan count must be >= 1".into()));
    }
    if s0 == sg {
        return Ok(vec![HighLevelPlan {
            states: vec![s0],
            origin: s0,
        }]);
    }
    let mut seq = 0u64;
    let mut node = |current: StateId, path: Vec<StateId>, g: usize, f: f64| {
        seq += 1;
        Node {
            current,
            path,
            g,
            f,
            seq,
        }
    };
    let mut fringe = vec![node(s0, vec![], 0, 0.0), node(sg, vec![], 0, 0.0)];
    let extra = params.sources.unwrap_or(10).min(n);
    for s in sample(rng, n, extra).into_iter() {
        if s != s0 && s != sg {
            fringe.push(node(s, vec![], 0, 0.0));
        }
    }
    let mut plans = Vec::new();
    'rounds: while plans.len() < params.plans && !fringe.is_empty() {
        let working = top_w(std::mem::take(&mut fringe), params.width);
        for cur in working {
            if cur.current == sg {
                if cur.path.is_empty() {
                    // the goal source itself: explore only
                } else {
                    let mut states = cur.path.clone();
                    states.push(sg);
                    plans.push(HighLevelPlan {
                        origin: states[0],
                        states,
                    });
                    if plans.len() >= params.plans {
                        break 'rounds;
                    }
                    continue;
                }
            }
            let mut path = cur.path.clone();
            path.push(cur.current);
            for next in graph.successors(cur.current)? {
                if cur.visits(next) {
                    continue;
                }
                let h = table.node_h(dist, Some(cur.current), next, s0, sg)?;
                let g = cur.g + 1;
                fringe.push(node(next, path.clone(), g, g as f64 + h));
            }
        }
    }
    if !plans.iter().any(|p| p.starts_at(s0)) {
        let mut h = |parent: StateId, s: StateId| table.node_h(dist, Some(parent), s, s0, sg);
        if let Some(p) = beam_search(graph, s0, sg, n.max(1), &mut h)? {
            plans.push(p);
        }
    }
    Ok(plans)
}

/// Single-source beam search. Each round keeps the `w` best nodes by
/// `g + h(parent, s)` after merging nodes that share a state; with `w >= |S|`
/// and `h ≡ 0` this is breadth-first search.
pub fn beam_search(
    graph: &mut dyn SearchGraph,
    s0: StateId,
    sg: StateId,
    w: usize,
    h: &mut dyn FnMut(StateId, StateId) -> Result<f64>,
) -> Result<Option<HighLevelPlan>> {
    check_endpoints(graph.state_count(), s0, sg)?;
    if w == 0 {
        return Err(HarpError::InvalidParameter("beam width must be >= 1".into()));
    }
    let mut seq = 0u64;
    let mut fringe = vec![Node {
        current: s0,
        path: vec![],
        g: 0,
        f: 0.0,
        seq,
    }];
    while !fringe.is_empty() {
        let working = top_w(std::mem::take(&mut fringe), w);
        let mut best: HashMap<StateId, usize> = HashMap::new();
        for cur in working {
            if cur.current == sg {
                let mut states = cur.path;
                states.push(sg);
                return Ok(Some(HighLevelPlan { states, origin: s0 }));
            }
            let mut path = cur.path.clone();
            path.push(cur.current);
            for next in graph.successors(cur.current)? {
                if cur.visits(next) {
                    continue;
                }
                let g = cur.g + 1;
                let f = g as f64 + h(cur.current, next)?;
                seq += 1;
                let cand = Node {
                    current: next,
                    path: path.clone(),
                    g,
                    f,
                    seq,
                };
                match best.get(&next) {
                    Some(&k) if fringe[k].f <= f => {}
                    Some(&k) => fringe[k] = cand,
                    None => {
                        best.insert(next, fringe.len());
                        fringe.push(cand);
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::VecDeque;

    fn undirected(n: usize, edges: &[(usize, usize)]) -> AdjacencyList {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        AdjacencyList(adj)
    }

    fn zero(_: StateId, _: StateId) -> f64 {
        0.0
    }

    fn unit(i: StateId, j: StateId) -> f64 {
        (i as f64 - j as f64).abs()
    }

    fn bfs(adj: &[Vec<usize>], s: usize, g: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; adj.len()];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &u in &adj[v] {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    q.push_back(u);
                }
            }
        }
        (dist[g] != usize::MAX).then_some(dist[g])
    }

    fn simple_paths(adj: &[Vec<usize>], s: usize, g: usize) -> Vec<Vec<usize>> {
        fn go(adj: &[Vec<usize>], path: &mut Vec<usize>, g: usize, out: &mut Vec<Vec<usize>>) {
            let v = *path.last().unwrap();
            if v == g {
                out.push(path.clone());
                return;
            }
            for &u in &adj[v] {
                if !path.contains(&u) {
                    path.push(u);
                    go(adj, path, g, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(adj, &mut vec![s], g, &mut out);
        out
    }

    #[test]
    fn h_prime_and_node_h_examples() {
        let mut t = HeuristicTable::new(4);
        let mut five = |_: StateId, _: StateId| 5.0;
        assert_eq!(t.h_prime(&mut five, 0, 1).unwrap(), 5.0);
        update_heuristic(&mut t, &[0, 1]);
        assert_eq!(t.h_prime(&mut five, 0, 1).unwrap(), 2.5);
        assert_eq!(t.h_prime(&mut five, 1, 0).unwrap(), 5.0);
        assert_eq!(t.h_prime(&mut five, 2, 2).unwrap(), 0.0);
        assert!(matches!(t.h_prime(&mut five, 0, 9), Err(HarpError::UnknownState(9))));

        // h'(m,n) = 2, h'(n,i) = 5, h'(n,g) = 3
        let mut d = |a: StateId, b: StateId| match (a.min(b), a.max(b)) {
            (0, 1) => 2.0,
            (1, 2) => 5.0,
            (1, 3) => 3.0,
            _ => 7.0,
        };
        let mut t = HeuristicTable::new(4);
        assert_eq!(t.node_h(&mut d, Some(0), 1, 2, 3).unwrap(), 5.0);
        assert_eq!(t.node_h(&mut d, Some(0), 3, 2, 3).unwrap(), 7.0);
        assert_eq!(t.node_h(&mut d, Some(0), 2, 2, 3).unwrap(), 7.0);
        assert_eq!(t.node_h(&mut d, None, 1, 2, 3).unwrap(), 3.0);
    }

    #[test]
    fn update_rule_composes() {
        let mut t = HeuristicTable::new(3);
        update_heuristic(&mut t, &[0, 1, 2]);
        assert_eq!(t.eps(0, 1), 0.5);
        update_heuristic(&mut t, &[0, 1]);
        assert_eq!(t.eps(0, 1), 0.25);
        assert_eq!(t.eps(1, 2), 0.5);
        assert_eq!(t.eps(2, 1), 1.0);
        assert_eq!(t.eps(0, 2), 1.0);
        for _ in 0..5000 {
            update_heuristic(&mut t, &[0, 1]);
        }
        assert!(t.eps(0, 1) > 0.0);
    }

    #[test]
    fn table_text_round_trip() {
        let mut t = HeuristicTable::new(5);
        update_heuristic(&mut t, &[4, 2, 0, 3]);
        update_heuristic(&mut t, &[4, 2]);
        let back = HeuristicTable::from_text(5, &t.to_text()).unwrap();
        assert_eq!(back.entries(), t.entries());
        assert_eq!(t.to_text().lines().next().unwrap(), "0 3 0.5");
        assert!(HeuristicTable::from_text(2, "0 5 0.5").is_err());
        assert!(HeuristicTable::from_text(2, "0 1 1.5").is_err());
        assert!(HeuristicTable::from_text(2, "0 1").is_err());
    }

    #[test]
    fn chain_gives_unique_plan() {
        let mut g = undirected(3, &[(0, 1), (1, 2)]);
        let mut t = HeuristicTable::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let params = BeamParams {
            width: 2,
            plans: 1,
            sources: Some(0),
        };
        let plans = ms_bidirectional_beam_search(&mut g, &mut t, &mut unit, 0, 2, &params, &mut rng).unwrap();
        assert_eq!(
            plans,
            vec![HighLevelPlan {
                states: vec![0, 1, 2],
                origin: 0
            }]
        );
    }

    #[test]
    fn four_cycle_yields_both_simple_paths() {
        let edges = [(0, 1), (1, 2), (2, 3), (3, 0)];
        let mut g = undirected(4, &edges);
        let mut oracle = simple_paths(&g.0, 0, 2);
        oracle.sort();
        let mut t = HeuristicTable::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let params = BeamParams {
            width: 4,
            plans: 2,
            sources: Some(0),
        };
        let plans = ms_bidirectional_beam_search(&mut g, &mut t, &mut unit, 0, 2, &params, &mut rng).unwrap();
        let mut got: Vec<_> = plans.into_iter().map(|p| p.states).collect();
        got.sort();
        assert_eq!(got, oracle);
    }

    #[test]
    fn disconnected_goal_gives_no_plans() {
        let mut g = undirected(4, &[(0, 1), (2, 3)]);
        let mut t = HeuristicTable::new(4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let only_endpoints = BeamParams {
            sources: Some(0),
            ..BeamParams::default()
        };
        let plans = ms_bidirectional_beam_search(&mut g, &mut t, &mut unit, 0, 3, &only_endpoints, &mut rng).unwrap();
        assert!(plans.is_empty());
        // random sources in the goal's component may still yield partial plans
        let plans =
            ms_bidirectional_beam_search(&mut g, &mut t, &mut unit, 0, 3, &BeamParams::default(), &mut rng).unwrap();
        assert!(plans.iter().all(|p| p.origin == 2 && p.states == vec![2, 3]));
    }

    #[test]
    fn same_start_and_goal() {
        let mut g = undirected(2, &[(0, 1)]);
        let mut t = HeuristicTable::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let plans =
            ms_bidirectional_beam_search(&mut g, &mut t, &mut unit, 1, 1, &BeamParams::default(), &mut rng).unwrap();
        assert_eq!(plans[0].states, vec![1]);
        let p = beam_search(&mut g, 1, 1, 1, &mut |_, _| Ok(0.0)).unwrap().unwrap();
        assert!(p.path().is_empty());
        assert_eq!(p.cost(), 0);
    }

    #[test]
    fn missing_endpoints_are_errors() {
        let mut g = undirected(2, &[(0, 1)]);
        let mut t = HeuristicTable::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(ms_bidirectional_beam_search(&mut g, &mut t, &mut unit, 0, 5, &BeamParams::default(), &mut rng).is_err());
        assert!(beam_search(&mut g, 7, 0, 1, &mut |_, _| Ok(0.0)).is_err());
    }

    #[test]
    fn narrow_beam_with_misleading_heuristic_fails() {
        // 0 -> 1 (dead end), 0 -> 2 -> 3
        let mut g = AdjacencyList(vec![vec![1, 2], vec![], vec![3], vec![]]);
        let mut h = |_: StateId, s: StateId| Ok(if s == 1 { 0.0 } else { 100.0 });
        assert_eq!(beam_search(&mut g, 0, 3, 1, &mut h).unwrap(), None);
        let found = beam_search(&mut g, 0, 3, 4, &mut h).unwrap().unwrap();
        assert_eq!(found.states, vec![0, 2, 3]);
    }

    #[test]
    fn random_sources_still_leave_a_plan_from_start() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(4..15);
            let mut edges = Vec::new();
            for v in 1..n {
                edges.push((rng.gen_range(0..v), v));
            }
            let mut g = undirected(n, &edges);
            let mut t = HeuristicTable::new(n);
            let params = BeamParams {
                width: 2,
                plans: 3,
                sources: None,
            };
            let plans = ms_bidirectional_beam_search(&mut g, &mut t, &mut zero, 0, n - 1, &params, &mut rng).unwrap();
            assert!(plans.iter().any(|p| p.starts_at(0)));
            for p in &plans {
                assert_eq!(*p.states.last().unwrap(), n - 1);
                assert_eq!(p.origin, p.states[0]);
                for w in p.states.windows(2) {
                    assert!(g.0[w[0]].contains(&w[1]));
                }
            }
        }
    }

    #[test]
    fn beam_search_matches_bfs_on_random_digraphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let n = rng.gen_range(2..=20);
            let mut adj = vec![Vec::new(); n];
            for (a, row) in adj.iter_mut().enumerate() {
                for b in 0..n {
                    if a != b && rng.gen_bool(0.15) {
                        row.push(b);
                    }
                }
            }
            let (s, g) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let expect = bfs(&adj, s, g);
            let mut graph = AdjacencyList(adj);
            let got = beam_search(&mut graph, s, g, n, &mut |_, _| Ok(0.0)).unwrap();
            assert_eq!(got.map(|p| p.cost()), expect);
        }
    }

    #[test]
    fn search_is_deterministic_for_a_seed() {
        let edges: Vec<_> = (0..12).flat_map(|v| [(v, (v + 1) % 12), (v, (v + 5) % 12)]).collect();
        let run = || {
            let mut g = undirected(12, &edges);
            let mut t = HeuristicTable::new(12);
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            ms_bidirectional_beam_search(&mut g, &mut t, &mut unit, 0, 6, &BeamParams::default(), &mut rng).unwrap()
        };
        assert_eq!(run(), run());
    }

    proptest! {
        #[test]
        fn eps_stays_in_unit_interval_and_never_grows(
            trajs in prop::collection::vec(prop::collection::vec(0usize..6, 0..12), 0..40)
        ) {
            let mut t = HeuristicTable::new(6);
            for tau in &trajs {
                let before = t.clone();
                update_heuristic(&mut t, tau);
                prop_assert!(t.dominated_by(&before));
                for (_, _, e) in t.entries() {
                    prop_assert!(e > 0.0 && e <= 1.0);
                }
            }
        }
    }
}
