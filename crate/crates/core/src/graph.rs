//! Weighted-graph representation with measure, balls, and validity certificates.
//!
//! A graph is a finite vertex set with symmetric positive edge weights `mu`.
//! The vertex measure is `m(x) = sum_{y ~ x} mu_xy`, the reversible Markov
//! kernel is `p(x,y) = mu_xy / (m(x) m(y))`, and distances are BFS hop counts.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::GraphError;

pub type VertexId = usize;

static NEXT_GRAPH_ID: AtomicU64 = AtomicU64::new(1);

/// Finite weighted graph, immutable after construction.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    id: u64,
    n_vertices: usize,
    /// Canonical edge list with `u <= v`; self-loops have `u == v`.
    edges: Vec<(VertexId, VertexId, f64)>,
    /// Per-vertex neighbor list `(neighbor, mu)`, including self-loops.
    adjacency: Vec<Vec<(VertexId, f64)>>,
    measure: Vec<f64>,
    laziness: f64,
    /// Local uniform finiteness bound: max over x of #B(x,1).
    max_ball1: usize,
}

/// A BFS ball `B(center, radius)` together with its measure-volume.
#[derive(Debug, Clone)]
pub struct BallIndex {
    pub center: VertexId,
    pub radius: usize,
    /// Sorted vertex ids with hop distance at most `radius` from the center.
    pub members: Vec<VertexId>,
    /// `V(center, radius) = sum of m(y) over members`.
    pub volume: f64,
}

impl WeightedGraph {
    /// Builds a graph from an edge list, certifying the construction
    /// invariants: positive symmetric weights, no duplicate edges, positive
    /// measure everywhere, and a single BFS component.
    pub fn from_edges(
        n_vertices: usize,
        edge_list: &[(VertexId, VertexId, f64)],
    ) -> Result<Self, GraphError> {
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(u, v, mu) in edge_list {
            for id in [u, v] {
                if id >= n_vertices {
                    return Err(GraphError::VertexOutOfRange { id, n_vertices });
                }
            }
            if !(mu > 0.0) || !mu.is_finite() {
                return Err(GraphError::NonpositiveWeight { u, v, weight: mu });
            }
            edges.push((u.min(v), u.max(v), mu));
        }
        edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        for w in edges.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(GraphError::DuplicateEdge {
                    u: w[0].0,
                    v: w[0].1,
                });
            }
        }

        let mut adjacency = vec![Vec::new(); n_vertices];
        let mut measure = vec![0.0; n_vertices];
        for &(u, v, mu) in &edges {
            adjacency[u].push((v, mu));
            measure[u] += mu;
            if u != v {
                adjacency[v].push((u, mu));
                measure[v] += mu;
            }
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(y, _)| y);
        }
        if let Some(id) = measure.iter().position(|&m| m <= 0.0) {
            return Err(GraphError::ZeroMeasure { id });
        }

        let max_ball1 = adjacency
            .iter()
            .enumerate()
            .map(|(x, list)| list.len() + usize::from(!list.iter().any(|&(y, _)| y == x)))
            .max()
            .unwrap_or(1);

        let graph = Self {
            id: NEXT_GRAPH_ID.fetch_add(1, Ordering::Relaxed),
            n_vertices,
            edges,
            adjacency,
            measure,
            laziness: 0.0,
            max_ball1,
        };

        // Connectivity: one BFS from vertex 0 must reach everything.
        if n_vertices > 0 {
            let dist = graph.bfs_distances(0);
            if let Some(b) = dist.iter().position(|&d| d == usize::MAX) {
                return Err(GraphError::Disconnected { a: 0, b });
            }
        }
        Ok(graph)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Opaque identity used to detect graph/function mismatches.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn edges(&self) -> &[(VertexId, VertexId, f64)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, x: VertexId) -> &[(VertexId, f64)] {
        &self.adjacency[x]
    }

    pub fn measure(&self, x: VertexId) -> f64 {
        self.measure[x]
    }

    pub fn measures(&self) -> &[f64] {
        &self.measure
    }

    pub fn total_measure(&self) -> f64 {
        self.measure.iter().sum()
    }

    /// Self-loop fraction recorded by `lazify`; 0 for raw graphs.
    pub fn laziness(&self) -> f64 {
        self.laziness
    }

    /// Local uniform finiteness constant `M`: max over x of #B(x,1).
    pub fn uniform_finiteness(&self) -> usize {
        self.max_ball1
    }

    /// One-step transition probability `p(x,y) m(y) = mu_xy / m(x)`.
    pub fn transition(&self, x: VertexId, y: VertexId) -> f64 {
        self.adjacency[x]
            .iter()
            .find(|&&(z, _)| z == y)
            .map(|&(_, mu)| mu / self.measure[x])
            .unwrap_or(0.0)
    }

    /// Hop distances from `source`; `usize::MAX` marks unreachable vertices.
    pub fn bfs_distances(&self, source: VertexId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n_vertices];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.adjacency[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Exact BFS ball with measure-volume.
    pub fn ball(&self, x: VertexId, r: usize) -> Result<BallIndex, GraphError> {
        if x >= self.n_vertices {
            return Err(GraphError::VertexOutOfRange {
                id: x,
                n_vertices: self.n_vertices,
            });
        }
        let dist = self.bfs_distances(x);
        let members: Vec<VertexId> = (0..self.n_vertices).filter(|&y| dist[y] <= r).collect();
        let volume = members.iter().map(|&y| self.measure[y]).sum();
        Ok(BallIndex {
            center: x,
            radius: r,
            members,
            volume,
        })
    }

    /// `V(x, r)` without materializing the member list.
    pub fn ball_volume(&self, dist_from_x: &[usize], r: usize) -> f64 {
        dist_from_x
            .iter()
            .zip(&self.measure)
            .filter(|&(&d, _)| d <= r)
            .map(|(_, &m)| m)
            .sum()
    }

    /// Max hop distance from `x` to any vertex.
    pub fn eccentricity(&self, x: VertexId) -> usize {
        self.bfs_distances(x).into_iter().max().unwrap_or(0)
    }

    /// Double-sweep diameter estimate (exact on trees, lower bound in general).
    pub fn pseudo_diameter(&self) -> usize {
        if self.n_vertices == 0 {
            return 0;
        }
        let d0 = self.bfs_distances(0);
        let far = (0..self.n_vertices).max_by_key(|&y| d0[y]).unwrap();
        self.eccentricity(far)
    }

    /// Approximate 1-center: minimize the max distance to an expanding set
    /// of farthest-point references. Exact on trees after the first double
    /// sweep; the refinement rounds matter on graphs (e.g. grids) where the
    /// two-reference midpoint set is degenerate and contains corners.
    pub fn center_vertex(&self) -> VertexId {
        if self.n_vertices == 0 {
            return 0;
        }
        let d0 = self.bfs_distances(0);
        let a = (0..self.n_vertices).max_by_key(|&y| d0[y]).unwrap();
        let da = self.bfs_distances(a);
        let b = (0..self.n_vertices).max_by_key(|&y| da[y]).unwrap();
        let mut refs = vec![da, self.bfs_distances(b)];
        let pick = |refs: &[Vec<usize>]| {
            (0..self.n_vertices)
                .min_by_key(|&x| {
                    let worst = refs.iter().map(|d| d[x]).max().unwrap();
                    let total: usize = refs.iter().map(|d| d[x]).sum();
                    (worst, total)
                })
                .unwrap()
        };
        let mut best = pick(&refs);
        for _ in 0..3 {
            let dx = self.bfs_distances(best);
            let far = (0..self.n_vertices).max_by_key(|&y| dx[y]).unwrap();
            refs.push(self.bfs_distances(far));
            let next = pick(&refs);
            if next == best {
                break;
            }
            best = next;
        }
        best
    }

    /// Returns the lazified graph: adds self-loop weight `alpha/(1-alpha) *
    /// m(x)` at every vertex so the new kernel has `p(x,x) m(x) = alpha`
    /// on loop-free inputs, making the walk analytic.
    pub fn lazify(&self, alpha: f64) -> Result<Self, GraphError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(GraphError::LazinessOutOfRange { alpha });
        }
        let factor = alpha / (1.0 - alpha);
        let mut edge_list: Vec<(VertexId, VertexId, f64)> = Vec::new();
        let mut loop_weight: Vec<f64> = (0..self.n_vertices)
            .map(|x| factor * self.measure[x])
            .collect();
        for &(u, v, mu) in &self.edges {
            if u == v {
                loop_weight[u] += mu;
            } else {
                edge_list.push((u, v, mu));
            }
        }
        for (x, &w) in loop_weight.iter().enumerate() {
            edge_list.push((x, x, w));
        }
        let mut g = Self::from_edges(self.n_vertices, &edge_list)?;
        g.laziness = alpha;
        Ok(g)
    }

    /// Certifies non-degenerate transitions: the minimum of `p(x,y) m(y)`
    /// over ordered neighbor pairs with `x != y`.
    pub fn certify_nondegeneracy(&self) -> f64 {
        let mut eps = f64::INFINITY;
        for &(u, v, mu) in &self.edges {
            if u != v {
                eps = eps.min(mu / self.measure[u]);
                eps = eps.min(mu / self.measure[v]);
            }
        }
        if eps.is_finite() {
            eps
        } else {
            0.0
        }
    }

    /// Smallest `ell <= ell_max` with `inf_x p_{2 ell + 1}(x,x) m(x) > 0`,
    /// together with that infimum. Computed by iterating the kernel from
    /// every vertex; fails on bipartite non-lazy graphs.
    pub fn certify_analyticity(&self, ell_max: usize) -> Result<(usize, f64), GraphError> {
        for ell in 0..=ell_max {
            let steps = 2 * ell + 1;
            let mut inf = f64::INFINITY;
            for x in 0..self.n_vertices {
                let ret = self.return_probability(x, steps);
                inf = inf.min(ret);
                if ret <= 0.0 {
                    break;
                }
            }
            if inf > 0.0 {
                return Ok((ell, inf));
            }
        }
        Err(GraphError::NotAnalytic {
            max_len: 2 * ell_max + 1,
        })
    }

    /// Probability of returning to `x` in exactly `steps` steps,
    /// i.e. `p_steps(x,x) m(x)`.
    fn return_probability(&self, x: VertexId, steps: usize) -> f64 {
        // prob[y] = chance the walk started at x sits at y.
        let mut prob = vec![0.0; self.n_vertices];
        prob[x] = 1.0;
        let mut next = vec![0.0; self.n_vertices];
        for _ in 0..steps {
            next.iter_mut().for_each(|v| *v = 0.0);
            for (y, &p) in prob.iter().enumerate() {
                if p > 0.0 {
                    for &(z, mu) in &self.adjacency[y] {
                        next[z] += p * mu / self.measure[y];
                    }
                }
            }
            std::mem::swap(&mut prob, &mut next);
        }
        prob[x]
    }
}
