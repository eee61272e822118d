use rand::RngCore;

use crate::abstraction::ConnectivityGrid;
use crate::cspace::{CSpace, Query};
use crate::ll_planner::UnionFind;

/// Connectivity of the cell-center lattice, with edges between face
/// neighbors whose straight segment is collision-free. Two configurations
/// that attach to the same lattice component are joined by a known
/// collision-free path.
pub struct Lattice {
    grid: ConnectivityGrid,
    component: Vec<Option<usize>>,
}

impl Lattice {
    pub fn build(space: &CSpace, angular_bins: usize) -> Self {
        let grid = ConnectivityGrid::new(space, angular_bins);
        let step = space.default_step();
        let centers: Vec<Vec<f64>> = (0..grid.len()).map(|c| grid.center(space, c)).collect();
        let free: Vec<bool> = centers.iter().map(|x| !space.collides(x)).collect();
        let mut uf = UnionFind::new(grid.len());
        for c in 0..grid.len() {
            if !free[c] {
                continue;
            }
            for n in grid.face_neighbors(c) {
                if n > c && free[n] && !uf.same(c, n) && space.segment_free(&centers[c], &centers[n], step) {
                    uf.union(c, n);
                }
            }
        }
        let component = (0..grid.len()).map(|c| free[c].then(|| uf.find(c))).collect();
        Lattice { grid, component }
    }

    fn attach(&self, space: &CSpace, x: &[f64]) -> Option<usize> {
        let ws = space.workspace();
        let (col, row) = ws.cell_at(x[0], x[1])?;
        let mut coords = vec![col, row];
        for dof in 2..space.dof() {
            coords.push(self.grid.bin_of(dof, x[dof]));
        }
        let cell = self.grid.cell(&coords);
        let comp = self.component[cell]?;
        let center = self.grid.center(space, cell);
        space.segment_free(x, &center, space.default_step()).then_some(comp)
    }

    /// True when both endpoints attach to the same lattice component.
    pub fn certifies(&self, space: &CSpace, query: &Query) -> bool {
        match (self.attach(space, &query.start.0), self.attach(space, &query.goal.0)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

/// Draws `n` free queries certified by `lattice` (any free pair for
/// non-holonomic robots), trying at most `max_tries` pairs per query.
/// Returns the queries and the number of slots given up on.
pub fn generate_queries(
    space: &CSpace,
    lattice: Option<&Lattice>,
    n: usize,
    max_tries: usize,
    rng: &mut dyn RngCore,
) -> (Vec<Query>, usize) {
    let mut out = Vec::with_capacity(n);
    let mut skipped = 0;
    for _ in 0..n {
        let found = (0..max_tries).find_map(|_| {
            let start = space.sample_free(rng, 1000)?;
            let goal = space.sample_free(rng, 1000)?;
            let q = Query::new(start, goal);
            match lattice {
                Some(l) if !l.certifies(space, &q) => None,
                _ => Some(q),
            }
        });
        match found {
            Some(q) => out.push(q),
            None => skipped += 1,
        }
    }
    (out, skipped)
}
