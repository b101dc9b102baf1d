//! Witness families for the Riesz / reverse-Riesz scans: tent functions,
//! heat-kernel cutoffs, random mean-zero noise, and eigenmode band mixtures.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::WitnessError;
use crate::function::{lp_norm, VertexFunction};
use crate::graph::{VertexId, WeightedGraph};
use crate::markov::{gradient_length, heat_column};
use crate::scaling::smooth_volume;
use crate::spectral::SpectralDecomposition;

/// The families of test functions driven through the ratio scans. Each maps a
/// scale parameter to a concrete function anchored at a vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WitnessFamily {
    /// `f_r(x) = max(0, r - d(x0, x))`, the radial bump of width r.
    Tent,
    /// Level cut of the k-step kernel column at height `1/(k V(y, k^{1/beta}))`.
    HeatCutoff { beta: f64 },
    /// Seeded uniform noise with the m-weighted mean removed.
    RandomMeanZero { seed: u64 },
    /// Random mixture of Laplacian eigenmodes with eigenvalue near
    /// `target / scale`, for a scale-dependent frequency band.
    EigenmodeBand { target: f64, width: f64, seed: u64 },
}

impl WitnessFamily {
    pub fn name(&self) -> &'static str {
        match self {
            WitnessFamily::Tent => "tent",
            WitnessFamily::HeatCutoff { .. } => "heat-cutoff",
            WitnessFamily::RandomMeanZero { .. } => "random-mean-zero",
            WitnessFamily::EigenmodeBand { .. } => "eigenmode-band",
        }
    }
}

/// Checks the witness support stays well inside the graph: the scale plus a
/// half-scale margin must fit within the anchor's eccentricity.
pub fn check_interior(
    g: &WeightedGraph,
    anchor: VertexId,
    scale: usize,
) -> Result<(), WitnessError> {
    let ecc = g.eccentricity(anchor);
    if scale + scale.div_ceil(2) > ecc {
        return Err(WitnessError::TouchesBoundary {
            scale,
            eccentricity: ecc,
        });
    }
    Ok(())
}

/// Tent witness `f_r(x) = max(0, r - d(x0, x))`.
pub fn tent_witness(
    g: &WeightedGraph,
    anchor: VertexId,
    r: usize,
) -> Result<VertexFunction, WitnessError> {
    check_interior(g, anchor, r)?;
    let dist = g.bfs_distances(anchor);
    let values = dist
        .iter()
        .map(|&d| (r as f64 - d as f64).max(0.0))
        .collect();
    Ok(VertexFunction::new(g, values).map_err(WitnessError::Op)?)
}

/// A realized heat-kernel cutoff together with the three diagnostic ratios
/// that should stay bounded in k when the sub-Gaussian picture holds.
#[derive(Debug, Clone)]
pub struct HeatCutoffWitness {
    pub function: VertexFunction,
    pub step: usize,
    /// Largest distance from the anchor over the support.
    pub support_radius: usize,
    /// support_radius / (k^{1/beta} log(k)^{(beta-1)/beta}).
    pub radius_ratio: f64,
    /// ||f||_2^2 * V(y, k^{1/beta}): the mass concentration ratio.
    pub mass_ratio: f64,
    /// ||grad f||_2^2 * k / ||f||_2^2: the energy-decay ratio.
    pub gradient_ratio: f64,
}

/// Builds the cutoff `f_k = max(0, p_k(., y) - 1/(k V(y, k^{1/beta})))` and
/// computes its diagnostic ratios.
pub fn heat_cutoff_witness(
    g: &WeightedGraph,
    anchor: VertexId,
    k: usize,
    beta: f64,
) -> Result<HeatCutoffWitness, WitnessError> {
    assert!(k >= 2, "cutoff needs k >= 2 for the log factor");
    let cols = heat_column(g, anchor, k, usize::MAX).map_err(WitnessError::Op)?;
    let dist = g.bfs_distances(anchor);
    let scale = (k as f64).powf(1.0 / beta);
    let volume = smooth_volume(g, &dist, scale);
    let height = 1.0 / (k as f64 * volume);
    let values: Vec<f64> = cols[k]
        .values
        .values()
        .iter()
        .map(|&p| (p - height).max(0.0))
        .collect();
    let support_radius = values
        .iter()
        .zip(&dist)
        .filter(|&(&v, _)| v > 0.0)
        .map(|(_, &d)| d)
        .max()
        .ok_or(WitnessError::DegenerateRatio {
            scale: k,
            denominator: 0.0,
            floor: height,
        })?;
    check_interior(g, anchor, support_radius.max(1))?;

    let f = VertexFunction::new(g, values).map_err(WitnessError::Op)?;
    let l2 = lp_norm(g, &f, 2.0).map_err(WitnessError::Op)?;
    if l2 == 0.0 {
        return Err(WitnessError::DegenerateRatio {
            scale: k,
            denominator: 0.0,
            floor: height,
        });
    }
    let grad = gradient_length(g, &f).map_err(WitnessError::Op)?;
    let grad2 = grad.inner_m(g, &grad);
    let log_factor = (k as f64).ln().powf((beta - 1.0) / beta);
    Ok(HeatCutoffWitness {
        function: f,
        step: k,
        support_radius,
        radius_ratio: support_radius as f64 / (scale * log_factor),
        mass_ratio: l2 * l2 * volume,
        gradient_ratio: grad2 * k as f64 / (l2 * l2),
    })
}

/// Seeded uniform noise on the vertices with the m-weighted mean removed.
pub fn random_mean_zero(g: &WeightedGraph, seed: u64) -> VertexFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..g.n_vertices())
        .map(|_| rng.gen_range(-1.0..1.0))
        .collect();
    VertexFunction::new(g, values).unwrap().mean_zero(g)
}

/// Random unit mixture of eigenmodes with eigenvalue in
/// `[lambda_lo, lambda_hi]`.
pub fn eigenmode_band(
    g: &WeightedGraph,
    dec: &SpectralDecomposition,
    lambda_lo: f64,
    lambda_hi: f64,
    seed: u64,
) -> Result<VertexFunction, WitnessError> {
    dec.check_graph(g).map_err(WitnessError::Op)?;
    let band: Vec<usize> = (0..dec.n())
        .filter(|&i| dec.eigenvalues[i] >= lambda_lo && dec.eigenvalues[i] <= lambda_hi)
        .filter(|&i| dec.eigenvalues[i] > crate::spectral::ZERO_EIGENVALUE_TOL)
        .collect();
    if band.is_empty() {
        return Err(WitnessError::EmptyBand);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![0.0; dec.n()];
    for &i in &band {
        coeffs[i] = rng.gen_range(-1.0..1.0);
    }
    let norm2: f64 = coeffs.iter().map(|c| c * c).sum();
    let scale = 1.0 / norm2.sqrt().max(f64::MIN_POSITIVE);
    for c in coeffs.iter_mut() {
        *c *= scale;
    }
    let values = dec.synthesize(&coeffs, |_| 1.0);
    Ok(VertexFunction::new(g, values).map_err(WitnessError::Op)?)
}
