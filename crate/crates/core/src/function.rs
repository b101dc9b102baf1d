//! Real-valued functions on vertices, with Lp norms taken against the
//! graph measure `m`.

use crate::error::OpError;
use crate::graph::{VertexId, WeightedGraph};

/// A function on the vertices of one specific graph.
#[derive(Debug, Clone)]
pub struct VertexFunction {
    graph_id: u64,
    values: Vec<f64>,
}

impl VertexFunction {
    /// Wraps raw values, checking length and finiteness.
    pub fn new(g: &WeightedGraph, values: Vec<f64>) -> Result<Self, OpError> {
        if values.len() != g.n_vertices() || values.iter().any(|v| !v.is_finite()) {
            return Err(OpError::GraphMismatch);
        }
        Ok(Self {
            graph_id: g.id(),
            values,
        })
    }

    pub fn zeros(g: &WeightedGraph) -> Self {
        Self {
            graph_id: g.id(),
            values: vec![0.0; g.n_vertices()],
        }
    }

    pub fn constant(g: &WeightedGraph, value: f64) -> Self {
        Self {
            graph_id: g.id(),
            values: vec![value; g.n_vertices()],
        }
    }

    /// Normalized point mass `p_0(., y) = delta(., y) / m(y)`.
    pub fn point_mass(g: &WeightedGraph, y: VertexId) -> Self {
        let mut values = vec![0.0; g.n_vertices()];
        values[y] = 1.0 / g.measure(y);
        Self {
            graph_id: g.id(),
            values,
        }
    }

    pub fn check_graph(&self, g: &WeightedGraph) -> Result<(), OpError> {
        if self.graph_id == g.id() {
            Ok(())
        } else {
            Err(OpError::GraphMismatch)
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// m-weighted inner product with another function on the same graph.
    pub fn inner_m(&self, g: &WeightedGraph, other: &Self) -> f64 {
        debug_assert_eq!(self.graph_id, other.graph_id);
        self.values
            .iter()
            .zip(&other.values)
            .zip(g.measures())
            .map(|((a, b), m)| a * b * m)
            .sum()
    }

    /// m-weighted mean over the whole graph.
    pub fn mean_m(&self, g: &WeightedGraph) -> f64 {
        let total: f64 = g.total_measure();
        self.values
            .iter()
            .zip(g.measures())
            .map(|(v, m)| v * m)
            .sum::<f64>()
            / total
    }

    /// Returns the m-weighted mean-zero projection.
    pub fn mean_zero(&self, g: &WeightedGraph) -> Self {
        let mean = self.mean_m(g);
        Self {
            graph_id: self.graph_id,
            values: self.values.iter().map(|v| v - mean).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            graph_id: self.graph_id,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.graph_id, other.graph_id);
        Self {
            graph_id: self.graph_id,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub(crate) fn from_raw(graph_id: u64, values: Vec<f64>) -> Self {
        Self { graph_id, values }
    }
}

/// `(sum_x |f(x)|^p m(x))^(1/p)`; sup-norm at `p = infinity`.
pub fn lp_norm(g: &WeightedGraph, f: &VertexFunction, p: f64) -> Result<f64, OpError> {
    f.check_graph(g)?;
    if p.is_infinite() && p > 0.0 {
        return Ok(f.values().iter().fold(0.0f64, |acc, v| acc.max(v.abs())));
    }
    if !(p >= 1.0) {
        return Err(OpError::InvalidExponent { p });
    }
    let sum: f64 = f
        .values()
        .iter()
        .zip(g.measures())
        .map(|(v, m)| v.abs().powf(p) * m)
        .sum();
    Ok(sum.powf(1.0 / p))
}
