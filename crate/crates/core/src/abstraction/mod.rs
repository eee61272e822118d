//! Implicit region-based Voronoi abstraction.
//!
//! One abstract state per critical region, sharing its id. A configuration
//! belongs to the state whose region has the nearest stored sample; the
//! partition itself is never built. Neighbor verdicts between states are
//! established lazily by [`AbstractGraph`].

mod graph;
mod index;

use std::collections::VecDeque;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::critical_regions::CriticalRegion;
use crate::cspace::{CSpace, Configuration, Trajectory, HINGE_LIMIT};
use crate::error::{HarpError, Result};

pub use graph::{AbstractGraph, Verdict, DEFAULT_PROBES};
pub use index::SampleIndex;

/// Abstract state id; equal to the id of its critical region.
pub type StateId = usize;

/// `d^c(x, r)`: distance from `x` to the closest sample of `r`.
pub fn d_c(space: &CSpace, x: &Configuration, region: &CriticalRegion) -> Result<f64> {
    space.check_dims(&x.0)?;
    region
        .samples
        .iter()
        .map(|s| space.dist(&x.0, &s.0))
        .min_by(f64::total_cmp)
        .ok_or(HarpError::EmptyRegion(region.id))
}

/// `d^r(r1, r2)`: closest pair of samples across the two regions.
pub fn d_r(space: &CSpace, r1: &CriticalRegion, r2: &CriticalRegion) -> Result<f64> {
    for r in [r1, r2] {
        if r.samples.is_empty() {
            return Err(HarpError::EmptyRegion(r.id));
        }
    }
    let mut best = f64::INFINITY;
    for a in &r1.samples {
        for b in &r2.samples {
            best = best.min(space.dist_sq(&a.0, &b.0));
        }
    }
    Ok(best.sqrt())
}

/// Critical regions plus the sample index used to classify configurations.
#[derive(Clone, Debug)]
pub struct Abstraction {
    regions: Vec<CriticalRegion>,
    index: SampleIndex,
}

impl Abstraction {
    /// Region ids must equal their positions; every region needs samples.
    pub fn new(space: &CSpace, regions: Vec<CriticalRegion>) -> Result<Self> {
        let mut tagged = Vec::new();
        for (i, r) in regions.iter().enumerate() {
            if r.id != i {
                return Err(HarpError::InvalidParameter(format!(
                    "region at position {i} has id {}",
                    r.id
                )));
            }
            if r.samples.is_empty() {
                return Err(HarpError::EmptyRegion(i));
            }
            for s in &r.samples {
                space.check_dims(&s.0)?;
                tagged.push((s.clone(), i));
            }
        }
        let index = SampleIndex::build(space, tagged);
        Ok(Abstraction { regions, index })
    }

    pub fn state_count(&self) -> usize {
        self.regions.len()
    }

    pub fn regions(&self) -> &[CriticalRegion] {
        &self.regions
    }

    pub fn region(&self, s: StateId) -> &CriticalRegion {
        &self.regions[s]
    }

    pub fn index(&self) -> &SampleIndex {
        &self.index
    }

    pub(crate) fn state_of(&self, space: &CSpace, x: &[f64]) -> Option<StateId> {
        self.index.nearest_region(space, x).map(|(s, _)| s)
    }

    /// `α(x)`: the state whose region minimizes `d^c(x, ·)`, lowest id on ties.
    pub fn abstract_state_of(&self, space: &CSpace, x: &Configuration) -> Result<StateId> {
        space.check_dims(&x.0)?;
        self.state_of(space, &x.0).ok_or(HarpError::EmptyIndex)
    }

    /// `α` over the interpolants of `traj` at `step`, consecutive repeats collapsed.
    pub fn abstract_trajectory(&self, space: &CSpace, traj: &Trajectory, step: f64) -> Result<Vec<StateId>> {
        if self.index.is_empty() {
            return Err(HarpError::EmptyIndex);
        }
        let mut out: Vec<StateId> = Vec::new();
        for x in traj.interpolants(space, step) {
            let s = self.state_of(space, &x.0).expect("index is non-empty");
            if out.last() != Some(&s) {
                out.push(s);
            }
        }
        Ok(out)
    }

    /// Whether the free cells classified into `s` form one face-connected set.
    pub fn check_strong_connectivity(&self, space: &CSpace, s: StateId, grid: &ConnectivityGrid) -> Result<bool> {
        if s >= self.state_count() {
            return Err(HarpError::UnknownState(s));
        }
        Ok(self.strong_connectivity(space, grid)?[s])
    }

    /// [`check_strong_connectivity`](Self::check_strong_connectivity) for every state at once.
    pub fn strong_connectivity(&self, space: &CSpace, grid: &ConnectivityGrid) -> Result<Vec<bool>> {
        if !space.robot().is_holonomic() {
            return Err(HarpError::Unsupported(
                "strong connectivity check requires a holonomic robot".into(),
            ));
        }
        let labels = grid.classify(self, space);
        let mut components = vec![0usize; self.state_count()];
        let mut seen = vec![false; labels.len()];
        for start in 0..labels.len() {
            let Some(s) = labels[start] else { continue };
            if seen[start] {
                continue;
            }
            components[s] += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(c) = queue.pop_front() {
                for n in grid.face_neighbors(c) {
                    if !seen[n] && labels[n] == Some(s) {
                        seen[n] = true;
                        queue.push_back(n);
                    }
                }
            }
        }
        Ok(components.into_iter().map(|c| c == 1).collect())
    }
}

/// Discretization used by the strong-connectivity check: every workspace
/// grid cell crossed with `angular_bins` bins per angular DOF.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityGrid {
    pub angular_bins: usize,
    dims: Vec<usize>,
    wraps: Vec<bool>,
}

impl ConnectivityGrid {
    pub fn new(space: &CSpace, angular_bins: usize) -> Self {
        let ws = space.workspace();
        let mut dims = vec![ws.width_cells(), ws.height_cells()];
        let mut wraps = vec![false, false];
        for dof in 2..space.dof() {
            dims.push(angular_bins.max(1));
            wraps.push(space.robot().wraps(dof));
        }
        ConnectivityGrid {
            angular_bins,
            dims,
            wraps,
        }
    }

    pub fn default_for(space: &CSpace) -> Self {
        Self::new(space, 8)
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn coords(&self, mut cell: usize) -> Vec<usize> {
        self.dims
            .iter()
            .map(|&d| {
                let c = cell % d;
                cell /= d;
                c
            })
            .collect()
    }

    pub(crate) fn cell(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.dims).rev().fold(0, |acc, (&c, &d)| acc * d + c)
    }

    /// Cell-center configuration.
    pub fn center(&self, space: &CSpace, cell: usize) -> Vec<f64> {
        let c = self.coords(cell);
        let (x, y) = space.workspace().cell_center(c[0], c[1]);
        let mut out = vec![x, y];
        for k in 2..c.len() {
            let n = self.dims[k] as f64;
            out.push(if self.wraps[k] {
                -PI + c[k] as f64 * 2.0 * PI / n
            } else {
                -HINGE_LIMIT + (c[k] as f64 + 0.5) * 2.0 * HINGE_LIMIT / n
            });
        }
        out
    }

    /// Bin of `v` along grid axis `k >= 2`; wrapping bins are centered on
    /// `-π + i·2π/n`.
    pub(crate) fn bin_of(&self, k: usize, v: f64) -> usize {
        let n = self.dims[k];
        if self.wraps[k] {
            let b = ((v + PI) * n as f64 / (2.0 * PI)).round() as i64;
            b.rem_euclid(n as i64) as usize
        } else {
            let b = ((v + HINGE_LIMIT) * n as f64 / (2.0 * HINGE_LIMIT)).floor();
            (b.max(0.0) as usize).min(n - 1)
        }
    }

    pub(crate) fn face_neighbors(&self, cell: usize) -> Vec<usize> {
        let c = self.coords(cell);
        let mut out = Vec::with_capacity(2 * c.len());
        for k in 0..c.len() {
            let d = self.dims[k];
            let mut push = |v: usize| {
                let mut n = c.clone();
                n[k] = v;
                let id = self.cell(&n);
                if id != cell && !out.contains(&id) {
                    out.push(id);
                }
            };
            if c[k] > 0 {
                push(c[k] - 1);
            } else if self.wraps[k] {
                push(d - 1);
            }
            if c[k] + 1 < d {
                push(c[k] + 1);
            } else if self.wraps[k] {
                push(0);
            }
        }
        out
    }

    /// State of every free cell center, `None` for colliding cells.
    pub fn classify(&self, abs: &Abstraction, space: &CSpace) -> Vec<Option<StateId>> {
        (0..self.len())
            .map(|cell| {
                let x = self.center(space, cell);
                if space.collides(&x) {
                    None
                } else {
                    abs.state_of(space, &x)
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cspace::{RobotModel, Workspace};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn region(id: usize, pts: &[[f64; 2]]) -> CriticalRegion {
        CriticalRegion {
            id,
            cells: vec![],
            samples: pts.iter().map(|p| Configuration(p.to_vec())).collect(),
            score: 1.0,
            channels: vec![],
        }
    }

    fn space(ws: Workspace) -> CSpace {
        CSpace::new(ws, RobotModel::point())
    }

    fn open(n: usize) -> CSpace {
        space(Workspace::free(n, n, 0.1).unwrap())
    }

    #[test]
    fn d_c_and_d_r_examples() {
        let sp = open(100);
        let r0 = region(0, &[[0.0, 0.0]]);
        let r1 = region(1, &[[3.0, 4.0]]);
        assert_eq!(d_c(&sp, &Configuration(vec![3.0, 4.0]), &r0).unwrap(), 5.0);
        assert_eq!(d_c(&sp, &Configuration(vec![0.0, 0.0]), &r0).unwrap(), 0.0);
        assert_eq!(d_r(&sp, &r0, &r1).unwrap(), 5.0);
        assert_eq!(d_r(&sp, &r1, &r1).unwrap(), 0.0);
        let empty = region(2, &[]);
        assert!(matches!(d_c(&sp, &Configuration(vec![0.0, 0.0]), &empty), Err(HarpError::EmptyRegion(2))));
        assert!(d_r(&sp, &r0, &empty).is_err());
    }

    #[test]
    fn d_c_and_d_r_match_brute_force() {
        let sp = open(100);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pts = |n: usize| -> Vec<[f64; 2]> {
            (0..n).map(|_| [rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)]).collect()
        };
        let a = pts(100);
        let b = pts(50);
        let c = pts(50);
        let x = [4.2, 7.7];
        let brute_c = a.iter().map(|p| ((p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2)).sqrt()).fold(f64::INFINITY, f64::min);
        let ra = region(0, &a);
        assert!((d_c(&sp, &Configuration(x.to_vec()), &ra).unwrap() - brute_c).abs() < 1e-12);
        let mut brute_r = f64::INFINITY;
        for p in &b {
            for q in &c {
                brute_r = brute_r.min(((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt());
            }
        }
        assert!((d_r(&sp, &region(0, &b), &region(1, &c)).unwrap() - brute_r).abs() < 1e-12);
    }

    #[test]
    fn alpha_tie_goes_to_lower_id() {
        let sp = open(100);
        let abs = Abstraction::new(&sp, vec![region(0, &[[1.0, 1.0]]), region(1, &[[3.0, 1.0]])]).unwrap();
        assert_eq!(abs.abstract_state_of(&sp, &Configuration(vec![2.0, 1.0])).unwrap(), 0);
        assert_eq!(abs.abstract_state_of(&sp, &Configuration(vec![3.0, 1.0])).unwrap(), 1);
        assert!(Abstraction::new(&sp, vec![region(1, &[[1.0, 1.0]])]).is_err());
        assert!(matches!(Abstraction::new(&sp, vec![region(0, &[])]), Err(HarpError::EmptyRegion(0))));
        let none = Abstraction::new(&sp, vec![]).unwrap();
        assert!(matches!(none.abstract_state_of(&sp, &Configuration(vec![1.0, 1.0])), Err(HarpError::EmptyIndex)));
    }

    #[test]
    fn abstract_trajectory_collapses_and_reverses() {
        let sp = open(100);
        let abs = Abstraction::new(&sp, vec![region(0, &[[1.0, 1.0]]), region(1, &[[3.0, 1.0]])]).unwrap();
        let t = Trajectory::new(vec![Configuration(vec![0.5, 1.0]), Configuration(vec![3.5, 1.0])]).unwrap();
        assert_eq!(abs.abstract_trajectory(&sp, &t, 0.05).unwrap(), vec![0, 1]);
        assert_eq!(abs.abstract_trajectory(&sp, &t.reversed(), 0.05).unwrap(), vec![1, 0]);
        let inside = Trajectory::new(vec![Configuration(vec![0.5, 1.0]), Configuration(vec![1.5, 1.2])]).unwrap();
        assert_eq!(abs.abstract_trajectory(&sp, &inside, 0.05).unwrap(), vec![0]);
    }

    #[test]
    fn neighbors_in_open_room_and_across_wall() {
        // 4 m x 2 m with a full wall at x in [1.9, 2.1)
        let mut ws = Workspace::free(40, 20, 0.1).unwrap();
        ws.fill_cells(19, 0, 21, 20, true);
        let sp = space(ws);
        let abs = Abstraction::new(
            &sp,
            vec![
                region(0, &[[0.5, 0.5], [0.6, 1.5]]),
                region(1, &[[1.5, 1.0], [1.7, 0.4]]),
                region(2, &[[3.0, 1.0], [3.5, 0.5]]),
            ],
        )
        .unwrap();
        let mut g = AbstractGraph::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(g.are_neighbors(&abs, &sp, 0, 1, &mut rng).unwrap());
        assert_eq!(g.verdict(1, 0), Verdict::Neighbor);
        assert!(!g.are_neighbors(&abs, &sp, 1, 2, &mut rng).unwrap());
        g.escalate();
        assert!(!g.are_neighbors(&abs, &sp, 2, 1, &mut rng).unwrap());
        assert_eq!(g.neighbors(&abs, &sp, 0, &mut rng).unwrap(), vec![1]);
        assert_eq!(g.actions(), vec![(0, 1)]);
        assert!(g.are_neighbors(&abs, &sp, 1, 1, &mut rng).is_err());
        assert!(matches!(g.are_neighbors(&abs, &sp, 0, 7, &mut rng), Err(HarpError::UnknownState(7))));
    }

    #[test]
    fn doorway_owned_by_third_state_blocks_adjacency() {
        // wall at x = 2 with a doorway at y in [0.9, 1.1); region 2 sits in the doorway
        let mut ws = Workspace::free(40, 20, 0.1).unwrap();
        ws.fill_cells(19, 0, 21, 9, true);
        ws.fill_cells(19, 11, 21, 20, true);
        let sp = space(ws);
        let abs = Abstraction::new(
            &sp,
            vec![
                region(0, &[[1.0, 1.0]]),
                region(1, &[[3.0, 1.0]]),
                region(2, &[[2.0, 1.0]]),
            ],
        )
        .unwrap();
        let mut g = AbstractGraph::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(!g.are_neighbors(&abs, &sp, 0, 1, &mut rng).unwrap());
        assert!(g.are_neighbors(&abs, &sp, 0, 2, &mut rng).unwrap());
        assert!(g.are_neighbors(&abs, &sp, 2, 1, &mut rng).unwrap());
    }

    #[test]
    fn strong_connectivity_detects_split_cells() {
        // wall splits region 0's cell into two pockets; region 1 is compact
        let mut ws = Workspace::free(20, 10, 0.1).unwrap();
        ws.fill_cells(5, 0, 6, 10, true);
        let sp = space(ws);
        let abs = Abstraction::new(&sp, vec![region(0, &[[0.55, 0.5]]), region(1, &[[1.8, 0.5]])]).unwrap();
        let grid = ConnectivityGrid::default_for(&sp);
        assert!(!abs.check_strong_connectivity(&sp, 0, &grid).unwrap());
        assert!(abs.check_strong_connectivity(&sp, 1, &grid).unwrap());

        let single = Abstraction::new(&open(10), vec![region(0, &[[0.5, 0.5]])]).unwrap();
        assert!(single.check_strong_connectivity(&open(10), 0, &ConnectivityGrid::default_for(&open(10))).unwrap());

        // region 1 sits inside a sealed block: no free cell classifies to it
        let mut ws = Workspace::free(10, 10, 0.1).unwrap();
        ws.fill_cells(6, 6, 10, 10, true);
        let sp = space(ws);
        let mut free = Vec::new();
        for row in 0..10 {
            for col in 0..10 {
                if !sp.workspace().is_occupied(col, row) {
                    let (x, y) = sp.workspace().cell_center(col, row);
                    free.push([x, y]);
                }
            }
        }
        let abs = Abstraction::new(&sp, vec![region(0, &free), region(1, &[[0.95, 0.95]])]).unwrap();
        let verdicts = abs.strong_connectivity(&sp, &ConnectivityGrid::default_for(&sp)).unwrap();
        assert_eq!(verdicts, vec![true, false]);
    }

    #[test]
    fn strong_connectivity_rejects_car() {
        let sp = CSpace::new(Workspace::free(10, 10, 0.1).unwrap(), RobotModel::car(0.1, 0.05).unwrap());
        let abs = Abstraction::new(&sp, vec![]).unwrap();
        assert!(matches!(
            abs.strong_connectivity(&sp, &ConnectivityGrid::default_for(&sp)),
            Err(HarpError::Unsupported(_))
        ));
    }

    #[test]
    fn connectivity_grid_wraps_heading() {
        let sp = CSpace::new(Workspace::free(3, 3, 0.1).unwrap(), RobotModel::rect(0.01, 0.01).unwrap());
        let grid = ConnectivityGrid::new(&sp, 4);
        assert_eq!(grid.len(), 36);
        let first = grid.cell(&[1, 1, 0]);
        let last = grid.cell(&[1, 1, 3]);
        assert!(grid.face_neighbors(first).contains(&last));
        assert_eq!(grid.face_neighbors(grid.cell(&[0, 0, 1])).len(), 4);
    }
}
