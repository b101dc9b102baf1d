//! Dense eigendecomposition of the Laplacian in the m-weighted geometry, and
//! the spectral route to fractional powers.
//!
//! The Markov operator is self-adjoint in L^2(m) but not in unweighted
//! coordinates, so the eigensolve runs on the symmetrized kernel
//! `S_xy = mu_xy / sqrt(m(x) m(y))` and the eigenvectors are mapped back by
//! `v = D_m^{-1/2} u`, which makes them orthonormal for the m-inner product.

use nalgebra::DMatrix;

use crate::error::OpError;
use crate::function::VertexFunction;
use crate::graph::WeightedGraph;
use crate::markov::laplacian_apply;

pub const DEFAULT_DENSE_CAP: usize = 4000;
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-8;

/// Eigenvalues below this are treated as the kernel of the Laplacian.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-9;

/// Full eigensystem of the Laplacian `Delta = I - P` on a small graph.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    graph_id: u64,
    /// Eigenvalues of Delta, ascending, in [0, 2].
    pub eigenvalues: Vec<f64>,
    /// Column i is the eigenvector for `eigenvalues[i]`, m-orthonormal.
    pub eigenvectors: DMatrix<f64>,
    measures: Vec<f64>,
}

/// Full dense eigensolve of the m-symmetrized Markov operator.
pub fn spectral_decompose(
    g: &WeightedGraph,
    dense_cap: usize,
) -> Result<SpectralDecomposition, OpError> {
    let n = g.n_vertices();
    if n > dense_cap {
        return Err(OpError::DenseCapExceeded {
            n_vertices: n,
            cap: dense_cap,
        });
    }
    let sqrt_m: Vec<f64> = g.measures().iter().map(|m| m.sqrt()).collect();
    let mut s = DMatrix::<f64>::zeros(n, n);
    for &(u, v, mu) in g.edges() {
        let w = mu / (sqrt_m[u] * sqrt_m[v]);
        s[(u, v)] += w;
        if u != v {
            s[(v, u)] += w;
        }
    }
    let eigen = s.symmetric_eigen();

    // Sort by Laplacian eigenvalue lambda = 1 - s ascending.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let la = 1.0 - eigen.eigenvalues[a];
        let lb = 1.0 - eigen.eigenvalues[b];
        la.partial_cmp(&lb).unwrap()
    });

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = DMatrix::<f64>::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let lambda = (1.0 - eigen.eigenvalues[i]).clamp(0.0, 2.0);
        eigenvalues.push(lambda);
        for x in 0..n {
            eigenvectors[(x, col)] = eigen.eigenvectors[(x, i)] / sqrt_m[x];
        }
    }

    let dec = SpectralDecomposition {
        graph_id: g.id(),
        eigenvalues,
        eigenvectors,
        measures: g.measures().to_vec(),
    };
    dec.verify_residual(g)?;
    Ok(dec)
}

impl SpectralDecomposition {
    pub fn check_graph(&self, g: &WeightedGraph) -> Result<(), OpError> {
        if self.graph_id == g.id() {
            Ok(())
        } else {
            Err(OpError::GraphMismatch)
        }
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Smallest nonzero eigenvalue (spectral gap).
    pub fn spectral_gap(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .find(|&l| l > ZERO_EIGENVALUE_TOL)
            .unwrap_or(0.0)
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// m-inner-product coefficients of `f` in the eigenbasis.
    pub fn analyze(&self, f: &VertexFunction) -> Vec<f64> {
        let n = self.n();
        let mut coeffs = vec![0.0; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            let mut acc = 0.0;
            for x in 0..n {
                acc += f.values()[x] * self.eigenvectors[(x, i)] * self.measures[x];
            }
            *c = acc;
        }
        coeffs
    }

    /// Reconstructs `sum_i weight(lambda_i) c_i v_i`.
    pub fn synthesize(&self, coeffs: &[f64], mut weight: impl FnMut(f64) -> f64) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n];
        for (i, &c) in coeffs.iter().enumerate() {
            let w = weight(self.eigenvalues[i]) * c;
            if w != 0.0 {
                for (x, o) in out.iter_mut().enumerate() {
                    *o += w * self.eigenvectors[(x, i)];
                }
            }
        }
        out
    }

    fn verify_residual(&self, g: &WeightedGraph) -> Result<(), OpError> {
        let n = self.n();
        if n == 0 {
            return Ok(());
        }
        // Check a deterministic sample of eigenpairs: extremes plus a stride.
        let stride = (n / 8).max(1);
        let mut worst = 0.0f64;
        for i in (0..n).step_by(stride).chain([0, n - 1]) {
            let v = VertexFunction::from_raw(
                self.graph_id,
                (0..n).map(|x| self.eigenvectors[(x, i)]).collect(),
            );
            let lv = laplacian_apply(g, &v)?;
            let mut resid2 = 0.0;
            let mut norm2 = 0.0;
            for x in 0..n {
                let r = lv.values()[x] - self.eigenvalues[i] * v.values()[x];
                resid2 += r * r * self.measures[x];
                norm2 += v.values()[x] * v.values()[x] * self.measures[x];
            }
            worst = worst.max((resid2 / norm2).sqrt());
        }
        if worst > EIGEN_RESIDUAL_TOL {
            return Err(OpError::EigenResidual {
                residual: worst,
                tol: EIGEN_RESIDUAL_TOL,
            });
        }
        Ok(())
    }
}

/// Spectral fractional power: `Delta^gamma f = sum_i lambda_i^gamma <f, v_i>_m v_i`
/// with `0^gamma = 0` for `gamma > 0` and `0^0 = 1`.
pub fn frac_power_spectral(
    g: &WeightedGraph,
    dec: &SpectralDecomposition,
    gamma: f64,
    f: &VertexFunction,
) -> Result<VertexFunction, OpError> {
    f.check_graph(g)?;
    dec.check_graph(g)?;
    if !(0.0..=1.0).contains(&gamma) {
        return Err(OpError::GammaOutOfRange {
            gamma,
            range: "[0, 1]",
        });
    }
    let coeffs = dec.analyze(f);
    let out = dec.synthesize(&coeffs, |lambda| {
        if lambda <= ZERO_EIGENVALUE_TOL {
            if gamma == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            lambda.powf(gamma)
        }
    });
    Ok(VertexFunction::from_raw(g.id(), out))
}
