use crate::cspace::{CSpace, Configuration};

const LEAF_SIZE: usize = 8;

#[derive(Clone, Debug)]
enum Node {
    Leaf(Vec<usize>),
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

/// k-d tree over region samples, each tagged with its region id. Only
/// non-wrapping axes are split on; angular differences enter through the
/// leaf distance evaluations.
#[derive(Clone, Debug)]
pub struct SampleIndex {
    samples: Vec<Configuration>,
    owners: Vec<usize>,
    nodes: Vec<Node>,
}

impl SampleIndex {
    pub fn build(space: &CSpace, samples: Vec<(Configuration, usize)>) -> Self {
        let (samples, owners): (Vec<_>, Vec<_>) = samples.into_iter().unzip();
        let mut index = SampleIndex {
            samples,
            owners,
            nodes: Vec::new(),
        };
        if !index.samples.is_empty() {
            let axes: Vec<usize> = (0..space.dof()).filter(|&d| !space.robot().wraps(d)).collect();
            let ids: Vec<usize> = (0..index.samples.len()).collect();
            index.build_node(&axes, ids);
        }
        index
    }

    fn build_node(&mut self, axes: &[usize], mut ids: Vec<usize>) -> usize {
        let slot = self.nodes.len();
        self.nodes.push(Node::Leaf(Vec::new()));
        let spread = |ax: usize, ids: &[usize]| {
            let (lo, hi) = ids.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                let v = self.samples[i][ax];
                (lo.min(v), hi.max(v))
            });
            hi - lo
        };
        let best = axes
            .iter()
            .map(|&ax| (ax, spread(ax, &ids)))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((axis, s)) if ids.len() > LEAF_SIZE && s > 0.0 => {
                let mid = ids.len() / 2;
                ids.select_nth_unstable_by(mid, |&a, &b| self.samples[a][axis].total_cmp(&self.samples[b][axis]));
                let value = self.samples[ids[mid]][axis];
                let right_ids = ids.split_off(mid);
                let left = self.build_node(axes, ids);
                let right = self.build_node(axes, right_ids);
                self.nodes[slot] = Node::Split {
                    axis,
                    value,
                    left,
                    right,
                };
            }
            _ => self.nodes[slot] = Node::Leaf(ids),
        }
        slot
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> impl Iterator<Item = (&Configuration, usize)> {
        self.samples.iter().zip(self.owners.iter().copied())
    }

    /// Region owning the closest sample and that distance. Equal distances
    /// resolve to the lowest region id.
    pub fn nearest_region(&self, space: &CSpace, x: &[f64]) -> Option<(usize, f64)> {
        if self.samples.is_empty() {
            return None;
        }
        let mut best = (f64::INFINITY, usize::MAX);
        self.search(space, x, 0, &mut best);
        Some((best.1, best.0))
    }

    fn search(&self, space: &CSpace, x: &[f64], node: usize, best: &mut (f64, usize)) {
        match &self.nodes[node] {
            Node::Leaf(ids) => {
                for &i in ids {
                    let cand = (space.dist(x, &self.samples[i].0), self.owners[i]);
                    if cand.0 < best.0 || (cand.0 == best.0 && cand.1 < best.1) {
                        *best = cand;
                    }
                }
            }
            &Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = x[axis] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.search(space, x, near, best);
                // non-strict with slack: an equidistant sample may still win the id tie
                let bound = space.weight(axis) * diff.abs();
                if bound <= best.0 * (1.0 + 1e-9) + 1e-12 {
                    self.search(space, x, far, best);
                }
            }
        }
    }
}
