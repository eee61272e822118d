use std::collections::HashMap;

use crate::cspace::{CSpace, Configuration};

/// Bucket grid over the workspace coordinates. Nearest queries visit rings
/// of buckets outward and stop once no unvisited bucket can hold a closer
/// node, so results equal a linear scan with ties broken by lowest id.
pub(crate) struct PlanarHash {
    cell: f64,
    /// Lower bound on the metric per unit of planar distance.
    scale: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    lo: (i64, i64),
    hi: (i64, i64),
}

impl PlanarHash {
    pub fn new(space: &CSpace, cell: f64) -> Self {
        PlanarHash {
            cell,
            scale: space.weight(0).min(space.weight(1)),
            buckets: HashMap::new(),
            lo: (i64::MAX, i64::MAX),
            hi: (i64::MIN, i64::MIN),
        }
    }

    fn key(&self, x: &[f64]) -> (i64, i64) {
        ((x[0] / self.cell).floor() as i64, (x[1] / self.cell).floor() as i64)
    }

    pub fn insert(&mut self, id: usize, x: &[f64]) {
        let k = self.key(x);
        self.lo = (self.lo.0.min(k.0), self.lo.1.min(k.1));
        self.hi = (self.hi.0.max(k.0), self.hi.1.max(k.1));
        self.buckets.entry(k).or_default().push(id);
    }

    fn ring(&self, c: (i64, i64), k: i64, mut f: impl FnMut(usize)) {
        let mut visit = |dx: i64, dy: i64| {
            if let Some(ids) = self.buckets.get(&(c.0 + dx, c.1 + dy)) {
                ids.iter().for_each(|&i| f(i));
            }
        };
        if k == 0 {
            visit(0, 0);
            return;
        }
        for dx in -k..=k {
            visit(dx, -k);
            visit(dx, k);
        }
        for dy in -k + 1..k {
            visit(-k, dy);
            visit(k, dy);
        }
    }

    /// Nearest node accepted by `keep` within `max_dist`.
    pub fn nearest_where(
        &self,
        space: &CSpace,
        nodes: &[Configuration],
        x: &[f64],
        max_dist: f64,
        mut keep: impl FnMut(usize) -> bool,
    ) -> Option<(usize, f64)> {
        if self.buckets.is_empty() {
            return None;
        }
        let c = self.key(x);
        let reach = [c.0 - self.lo.0, self.hi.0 - c.0, c.1 - self.lo.1, self.hi.1 - c.1]
            .into_iter()
            .max()
            .unwrap_or(0)
            .max(0);
        let mut best: Option<(f64, usize)> = None;
        for k in 0..=reach {
            // ring k starts at least k - 1 cells away
            let bound = (k - 1).max(0) as f64 * self.cell * self.scale;
            if bound > max_dist || best.is_some_and(|b| b.0 < bound) {
                break;
            }
            self.ring(c, k, |i| {
                let d = space.dist(&nodes[i].0, x);
                if d <= max_dist && best.map_or(true, |b| (d, i) < b) && keep(i) {
                    best = Some((d, i));
                }
            });
        }
        best.map(|(d, i)| (i, d))
    }

    /// Nodes within `radius` of `x`, in ascending id order.
    pub fn within(&self, space: &CSpace, nodes: &[Configuration], x: &[f64], radius: f64) -> Vec<usize> {
        let c = self.key(x);
        let k = (radius / (self.cell * self.scale)).ceil() as i64;
        let mut out = Vec::new();
        for dx in -k..=k {
            for dy in -k..=k {
                if let Some(ids) = self.buckets.get(&(c.0 + dx, c.1 + dy)) {
                    out.extend(ids.iter().copied().filter(|&i| space.dist(&nodes[i].0, x) <= radius));
                }
            }
        }
        out.sort_unstable();
        out
    }
}
