//! Markov operator, Laplacian, gradient length, heat-kernel columns, and the
//! discrete time derivative.

use crate::error::OpError;
use crate::function::VertexFunction;
use crate::graph::{VertexId, WeightedGraph};

/// `Pf(x) = sum_y p(x,y) f(y) m(y) = (1/m(x)) sum_y mu_xy f(y)`.
pub fn apply_markov(g: &WeightedGraph, f: &VertexFunction) -> Result<VertexFunction, OpError> {
    f.check_graph(g)?;
    let mut out = vec![0.0; g.n_vertices()];
    let values = f.values();
    for (x, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for &(y, mu) in g.neighbors(x) {
            acc += mu * values[y];
        }
        *o = acc / g.measure(x);
    }
    Ok(VertexFunction::from_raw(g.id(), out))
}

/// Laplacian `Delta = I - P`.
pub fn laplacian_apply(g: &WeightedGraph, f: &VertexFunction) -> Result<VertexFunction, OpError> {
    let pf = apply_markov(g, f)?;
    Ok(f.sub(&pf))
}

/// Gradient length
/// `grad f(x) = (1/2 sum_{y~x} p(x,y) |f(y)-f(x)|^2 m(y))^(1/2)`.
pub fn gradient_length(g: &WeightedGraph, f: &VertexFunction) -> Result<VertexFunction, OpError> {
    f.check_graph(g)?;
    let values = f.values();
    let mut out = vec![0.0; g.n_vertices()];
    for (x, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for &(y, mu) in g.neighbors(x) {
            let diff = values[y] - values[x];
            acc += mu * diff * diff;
        }
        *o = (0.5 * acc / g.measure(x)).sqrt();
    }
    Ok(VertexFunction::from_raw(g.id(), out))
}

/// One column `p_k(., y)` of the k-step kernel.
#[derive(Debug, Clone)]
pub struct HeatKernelColumn {
    pub source: VertexId,
    pub step: usize,
    pub values: VertexFunction,
}

/// Columns `p_k(., y)` for `k = 0..=k_max`, by iterating the Markov operator
/// on the normalized point mass at `y`.
pub fn heat_column(
    g: &WeightedGraph,
    y: VertexId,
    k_max: usize,
    budget: usize,
) -> Result<Vec<HeatKernelColumn>, OpError> {
    if k_max.saturating_mul(g.n_vertices()) > budget {
        return Err(OpError::BudgetExceeded {
            what: format!(
                "heat_column k_max={} on {} vertices exceeds budget {}",
                k_max,
                g.n_vertices(),
                budget
            ),
        });
    }
    let mut cols = Vec::with_capacity(k_max + 1);
    let mut current = VertexFunction::point_mass(g, y);
    for step in 0..=k_max {
        cols.push(HeatKernelColumn {
            source: y,
            step,
            values: current.clone(),
        });
        if step < k_max {
            current = apply_markov(g, &current)?;
        }
    }
    Ok(cols)
}

/// Discrete time derivative `p_k - p_{k-1}` of two consecutive columns from
/// the same source.
pub fn time_derivative(
    col_k: &HeatKernelColumn,
    col_km1: &HeatKernelColumn,
) -> Result<VertexFunction, OpError> {
    if col_k.source != col_km1.source || col_k.step != col_km1.step + 1 {
        return Err(OpError::MismatchedColumns);
    }
    Ok(col_k.values.sub(&col_km1.values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::lp_norm;
    use crate::graph::WeightedGraph;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> WeightedGraph {
        WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap()
    }

    fn random_function(g: &WeightedGraph, seed: u64) -> VertexFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        VertexFunction::new(g, (0..g.n_vertices()).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .unwrap()
    }

    #[test]
    fn markov_preserves_constants() {
        let g = triangle().lazify(0.5).unwrap();
        let one = VertexFunction::constant(&g, 1.0);
        let p_one = apply_markov(&g, &one).unwrap();
        for &v in p_one.values() {
            assert_relative_eq!(v, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn markov_matches_dense_oracle_on_triangle() {
        let g = triangle();
        let f = random_function(&g, 7);
        let pf = apply_markov(&g, &f).unwrap();
        // Dense 3x3 kernel product: Pf(x) = sum_y p(x,y) f(y) m(y).
        for x in 0..3 {
            let mut expect = 0.0;
            for y in 0..3 {
                let mu = if x == y { 0.0 } else { 1.0 };
                let p_xy = mu / (g.measure(x) * g.measure(y));
                expect += p_xy * f.values()[y] * g.measure(y);
            }
            assert_relative_eq!(pf.values()[x], expect, epsilon = 1e-14);
        }
    }

    #[test]
    fn markov_sup_contraction() {
        let g = triangle().lazify(0.3).unwrap();
        let f = random_function(&g, 3);
        let pf = apply_markov(&g, &f).unwrap();
        let sup = lp_norm(&g, &f, f64::INFINITY).unwrap();
        assert!(lp_norm(&g, &pf, f64::INFINITY).unwrap() <= sup + 1e-14);
    }

    #[test]
    fn laplacian_kills_constants() {
        let g = triangle();
        let one = VertexFunction::constant(&g, 3.7);
        let lf = laplacian_apply(&g, &one).unwrap();
        for &v in lf.values() {
            assert_relative_eq!(v, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn gradient_zero_for_constants() {
        let g = triangle();
        let one = VertexFunction::constant(&g, 2.0);
        let grad = gradient_length(&g, &one).unwrap();
        assert!(grad.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gradient_indicator_on_single_edge() {
        // f = indicator of vertex 0 on the unit single edge: the defining sum
        // gives grad f(x) = (1/2 * p(x,y) m(y))^(1/2) = (1/2)^(1/2) at both
        // endpoints since p(x,y) m(y) = 1.
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let f = VertexFunction::new(&g, vec![1.0, 0.0]).unwrap();
        let grad = gradient_length(&g, &f).unwrap();
        assert_relative_eq!(grad.values()[0], 0.5f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(grad.values()[0], grad.values()[1], epsilon = 1e-14);
    }

    #[test]
    fn energy_identity_e2() {
        let g = triangle().lazify(0.4).unwrap();
        for seed in 0..20 {
            let f = random_function(&g, seed);
            let grad = gradient_length(&g, &f).unwrap();
            let lhs = grad.inner_m(&g, &grad);
            let lf = laplacian_apply(&g, &f).unwrap();
            let rhs = lf.inner_m(&g, &f);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
        }
    }

    #[test]
    fn pointwise_bound_rp1a() {
        // |Delta f(x)| <= sqrt(2) grad f(x), exact inequality.
        let g = triangle().lazify(0.25).unwrap();
        for seed in 0..50 {
            let f = random_function(&g, seed);
            let lf = laplacian_apply(&g, &f).unwrap();
            let grad = gradient_length(&g, &f).unwrap();
            for x in 0..g.n_vertices() {
                assert!(lf.values()[x].abs() <= 2f64.sqrt() * grad.values()[x] + 1e-14);
            }
        }
    }

    #[test]
    fn heat_column_step_zero() {
        let g = triangle();
        let cols = heat_column(&g, 1, 0, usize::MAX).unwrap();
        assert_relative_eq!(cols[0].values.values()[1], 1.0 / g.measure(1));
        assert_eq!(cols[0].values.values()[0], 0.0);
    }

    #[test]
    fn heat_column_conservation_and_symmetry() {
        let g = triangle().lazify(0.5).unwrap();
        let cols = heat_column(&g, 0, 8, usize::MAX).unwrap();
        for col in &cols {
            let mass: f64 = col
                .values
                .values()
                .iter()
                .zip(g.measures())
                .map(|(p, m)| p * m)
                .sum();
            assert_relative_eq!(mass, 1.0, epsilon = 1e-10);
            assert!(col.values.values().iter().all(|&p| p >= -1e-15));
        }
        // Symmetry: p_k(x, y) = p_k(y, x).
        let cols_from_2 = heat_column(&g, 2, 8, usize::MAX).unwrap();
        for k in 0..=8 {
            assert_relative_eq!(
                cols[k].values.values()[2],
                cols_from_2[k].values.values()[0],
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn heat_column_matches_dense_power_on_lazy_path() {
        let g = lattice().lazify(0.5).unwrap();
        let cols = heat_column(&g, 0, 1, usize::MAX).unwrap();
        // Dense 3x3 one-step kernel applied to p_0.
        let mut expect = vec![0.0; 3];
        for x in 0..3 {
            for &(y, mu) in g.neighbors(x) {
                if y == 0 {
                    expect[x] += mu / g.measure(x) / g.measure(0);
                }
            }
        }
        for x in 0..3 {
            assert_relative_eq!(cols[1].values.values()[x], expect[x], epsilon = 1e-14);
        }
    }

    fn lattice() -> WeightedGraph {
        crate::generate::lattice_box(1, 3).unwrap()
    }

    #[test]
    fn time_derivative_mass_cancels() {
        let g = triangle().lazify(0.5).unwrap();
        let cols = heat_column(&g, 0, 4, usize::MAX).unwrap();
        let diff = time_derivative(&cols[3], &cols[2]).unwrap();
        let mass: f64 = diff
            .values()
            .iter()
            .zip(g.measures())
            .map(|(p, m)| p * m)
            .sum();
        assert_relative_eq!(mass, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn time_derivative_hand_computed_on_lazy_edge() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0)])
            .unwrap()
            .lazify(0.5)
            .unwrap();
        let cols = heat_column(&g, 0, 1, usize::MAX).unwrap();
        let diff = time_derivative(&cols[1], &cols[0]).unwrap();
        // 2x2 dense: p_0 = (1/2, 0), p_1 = (1/4, 1/4).
        assert_relative_eq!(diff.values()[0], -0.25, epsilon = 1e-14);
        assert_relative_eq!(diff.values()[1], 0.25, epsilon = 1e-14);
    }

    #[test]
    fn time_derivative_rejects_mismatch() {
        let g = triangle();
        let cols = heat_column(&g, 0, 3, usize::MAX).unwrap();
        assert!(time_derivative(&cols[3], &cols[1]).is_err());
    }
}
