use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::cspace::{CSpace, Configuration};

/// Undirected weighted graph over configurations.
#[derive(Clone, Debug, Default)]
pub struct Roadmap {
    pub vertices: Vec<Configuration>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl Roadmap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, x: Configuration) -> usize {
        self.vertices.push(x);
        self.adjacency.push(Vec::new());
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize, weight: f64) {
        self.adjacency[a].push((b, weight));
        self.adjacency[b].push((a, weight));
    }

    /// Adds an edge weighted by the configuration-space distance.
    pub fn connect(&mut self, space: &CSpace, a: usize, b: usize) {
        let w = space.dist(&self.vertices[a].0, &self.vertices[b].0);
        self.add_edge(a, b, w);
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

#[derive(PartialEq)]
struct Entry {
    cost: f64,
    vertex: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum-weight vertex path and its cost, or `None` when disconnected.
pub fn dijkstra(roadmap: &Roadmap, start: usize, goal: usize) -> Option<(Vec<usize>, f64)> {
    let n = roadmap.len();
    if start >= n || goal >= n {
        return None;
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[start] = 0.0;
    heap.push(Entry {
        cost: 0.0,
        vertex: start,
    });
    while let Some(Entry { cost, vertex }) = heap.pop() {
        if vertex == goal {
            break;
        }
        if cost > dist[vertex] {
            continue;
        }
        for &(next, w) in roadmap.neighbors(vertex) {
            let c = cost + w;
            if c < dist[next] {
                dist[next] = c;
                prev[next] = vertex;
                heap.push(Entry {
                    cost: c,
                    vertex: next,
                });
            }
        }
    }
    if !dist[goal].is_finite() {
        return None;
    }
    let mut path = vec![goal];
    let mut v = goal;
    while v != start {
        v = prev[v];
        path.push(v);
    }
    path.reverse();
    Some((path, dist[goal]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> Roadmap {
        let mut g = Roadmap::new();
        for i in 0..n {
            g.add_vertex(Configuration(vec![i as f64]));
        }
        for &(a, b, w) in edges {
            g.add_edge(a, b, w);
        }
        g
    }

    #[test]
    fn single_edge() {
        let g = graph(2, &[(0, 1, 2.5)]);
        assert_eq!(dijkstra(&g, 0, 1), Some((vec![0, 1], 2.5)));
    }

    #[test]
    fn triangle_prefers_two_hops() {
        let g = graph(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]);
        assert_eq!(dijkstra(&g, 0, 2), Some((vec![0, 1, 2], 2.0)));
    }

    #[test]
    fn disconnected_is_none() {
        let g = graph(3, &[(0, 1, 1.0)]);
        assert_eq!(dijkstra(&g, 0, 2), None);
        assert_eq!(dijkstra(&g, 0, 7), None);
    }

    fn bellman_ford(n: usize, edges: &[(usize, usize, f64)], s: usize) -> Vec<f64> {
        let mut d = vec![f64::INFINITY; n];
        d[s] = 0.0;
        for _ in 0..n {
            for &(a, b, w) in edges {
                if d[a] + w < d[b] {
                    d[b] = d[a] + w;
                }
                if d[b] + w < d[a] {
                    d[a] = d[b] + w;
                }
            }
        }
        d
    }

    #[test]
    fn matches_bellman_ford_on_random_roadmaps() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = 50;
            let edges: Vec<_> = (0..150)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0.1..5.0)))
                .filter(|(a, b, _)| a != b)
                .collect();
            let g = graph(n, &edges);
            let oracle = bellman_ford(n, &edges, 0);
            for goal in 1..n {
                match dijkstra(&g, 0, goal) {
                    Some((path, cost)) => {
                        assert!((cost - oracle[goal]).abs() < 1e-9);
                        let walked: f64 = path
                            .windows(2)
                            .map(|w| {
                                g.neighbors(w[0])
                                    .iter()
                                    .filter(|(v, _)| *v == w[1])
                                    .map(|(_, c)| *c)
                                    .fold(f64::INFINITY, f64::min)
                            })
                            .sum();
                        assert!((walked - cost).abs() < 1e-9);
                    }
                    None => assert!(oracle[goal].is_infinite()),
                }
            }
        }
    }
}
