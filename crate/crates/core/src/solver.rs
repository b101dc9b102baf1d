//! Conjugate gradient for `(I - P_B) u = b` on the interior of a ball.
//!
//! `P_B` is the Markov operator restricted to the ball (walk killed outside),
//! symmetric in the m-weighted inner product and strictly substochastic on a
//! proper ball, so `I - P_B` is positive definite there.

use crate::error::FitError;
use crate::graph::{BallIndex, VertexId, WeightedGraph};

pub struct BallOperator<'a> {
    graph: &'a WeightedGraph,
    /// Ball members, in member order.
    members: Vec<VertexId>,
    /// Map from vertex id to member index; usize::MAX for outside.
    local: Vec<usize>,
}

impl<'a> BallOperator<'a> {
    pub fn new(graph: &'a WeightedGraph, ball: &BallIndex) -> Self {
        let mut local = vec![usize::MAX; graph.n_vertices()];
        for (i, &x) in ball.members.iter().enumerate() {
            local[x] = i;
        }
        Self {
            graph,
            members: ball.members.clone(),
            local,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    /// out = (I - P_B) v in member coordinates.
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (i, &x) in self.members.iter().enumerate() {
            let mut acc = 0.0;
            for &(y, mu) in self.graph.neighbors(x) {
                let j = self.local[y];
                if j != usize::MAX {
                    acc += mu * v[j];
                }
            }
            out[i] = v[i] - acc / self.graph.measure(x);
        }
    }

    fn dot_m(&self, a: &[f64], b: &[f64]) -> f64 {
        self.members
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&x, (&ai, &bi))| ai * bi * self.graph.measure(x))
            .sum()
    }

    /// Solves `(I - P_B) u = b` by conjugate gradient in the m-inner product
    /// to relative residual `tol`.
    pub fn solve(&self, b: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>, FitError> {
        let n = self.len();
        let mut u = vec![0.0; n];
        let mut r = b.to_vec();
        let mut p = r.clone();
        let mut ap = vec![0.0; n];
        let b_norm = self.dot_m(b, b).sqrt().max(f64::MIN_POSITIVE);
        let mut rr = self.dot_m(&r, &r);
        for iter in 0..max_iter {
            if rr.sqrt() <= tol * b_norm {
                return Ok(u);
            }
            self.apply(&p, &mut ap);
            let alpha = rr / self.dot_m(&p, &ap);
            for i in 0..n {
                u[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            let rr_new = self.dot_m(&r, &r);
            let beta = rr_new / rr;
            rr = rr_new;
            for i in 0..n {
                p[i] = r[i] + beta * p[i];
            }
            if iter + 1 == max_iter {
                break;
            }
        }
        if rr.sqrt() <= tol * b_norm {
            Ok(u)
        } else {
            Err(FitError::SolverDiverged {
                residual: rr.sqrt() / b_norm,
                iterations: max_iter,
            })
        }
    }
}
