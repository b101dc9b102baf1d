//! Matrix-free routes to `Delta^gamma f`: the binomial series in powers of
//! the Markov operator, and the discrete Littlewood-Paley square functional.

use crate::error::OpError;
use crate::function::{lp_norm, VertexFunction};
use crate::graph::WeightedGraph;
use crate::markov::apply_markov;

/// Optional spectral bracket `[lambda_min, lambda_max]` for the nonzero
/// Laplacian spectrum, used to sharpen the series tail bound. The bracket is
/// caller-supplied (e.g. from a power-iteration estimate) and trusted.
#[derive(Debug, Clone, Copy)]
pub struct SpectralBand {
    pub lambda_min: f64,
    pub lambda_max: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct BinomialReport {
    /// Number of series terms actually applied.
    pub n_terms: usize,
    /// Certified bound on the L2 operator error of the truncation, relative
    /// to the norm of the mean-free part of the input.
    pub tail_bound: f64,
}

pub const DEFAULT_SERIES_CAP: usize = 50_000_000;

/// `Delta^gamma f` through the series `(I-P)^gamma = sum_n a_n P^n` with
/// `a_0 = 1`, `a_n = a_{n-1} (n-1-gamma)/n`. The constant component is
/// projected out first (it is annihilated by `Delta^gamma` for `gamma > 0`)
/// so a spectral band for the mean-free subspace can certify a geometric
/// tail. Truncation stops once the certified tail falls below `tol`.
pub fn frac_power_binomial(
    g: &WeightedGraph,
    gamma: f64,
    f: &VertexFunction,
    tol: f64,
    band: Option<SpectralBand>,
    max_terms: usize,
) -> Result<(VertexFunction, BinomialReport), OpError> {
    f.check_graph(g)?;
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(OpError::GammaOutOfRange {
            gamma,
            range: "(0, 1]",
        });
    }
    assert!(tol > 0.0);

    let f0 = f.mean_zero(g);
    // Spectral radius of P on the mean-free subspace, if a band was given.
    let rho = band.map(|b| {
        let lo = (1.0 - b.lambda_min).abs();
        let hi = (1.0 - b.lambda_max).abs();
        lo.max(hi).min(1.0)
    });

    let mut acc: Vec<f64> = f0.values().to_vec(); // a_0 = 1 term
    let mut power = f0.clone(); // P^n f0
    let mut coeff = 1.0f64;
    let mut rho_pow = 1.0f64;
    let mut n = 0usize;
    loop {
        n += 1;
        if n > max_terms {
            let achieved = tail_bound(coeff, n - 1, gamma, rho, rho_pow);
            return Err(OpError::SeriesTruncated {
                max_terms,
                achieved_tail: achieved,
            });
        }
        power = apply_markov(g, &power)?;
        coeff *= (n as f64 - 1.0 - gamma) / n as f64;
        if let Some(r) = rho {
            rho_pow *= r;
        }
        if coeff != 0.0 {
            for (a, p) in acc.iter_mut().zip(power.values()) {
                *a += coeff * p;
            }
        }
        let tail = tail_bound(coeff, n, gamma, rho, rho_pow);
        if tail <= tol || coeff == 0.0 {
            return Ok((
                VertexFunction::from_raw(g.id(), acc),
                BinomialReport {
                    n_terms: n,
                    tail_bound: tail,
                },
            ));
        }
    }
}

/// Certified bound on `sum_{n > N} |a_n| rho^n`.
///
/// Without a band: integral comparison `sum_{n>N} |a_n| <= |a_N| N / gamma`
/// from `|a_n| ~ n^{-1-gamma}`. With a band of radius `rho < 1`: the
/// coefficients decrease in absolute value, so the tail is dominated by the
/// geometric series `|a_{N+1}| rho^{N+1} / (1 - rho)`. The two bounds are
/// both valid; take the smaller.
fn tail_bound(a_n: f64, n: usize, gamma: f64, rho: Option<f64>, rho_pow_n: f64) -> f64 {
    let coeff_tail = a_n.abs() * n as f64 / gamma;
    match rho {
        Some(r) if r < 1.0 => {
            let geometric = a_n.abs() * rho_pow_n * r / (1.0 - r);
            coeff_tail.min(geometric)
        }
        _ => coeff_tail,
    }
}

/// Power-iteration estimate of the spectral radius of `P` restricted to the
/// mean-free subspace. The return value is an estimate, not a certificate;
/// callers should apply a safety margin before using it in `SpectralBand`.
pub fn meanzero_radius_estimate(g: &WeightedGraph, iterations: usize, seed: u64) -> f64 {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: Vec<f64> = (0..g.n_vertices()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut v = VertexFunction::new(g, start).unwrap().mean_zero(g);
    let mut rho = 0.0;
    for _ in 0..iterations {
        let pv = apply_markov(g, &v).unwrap().mean_zero(g);
        let num = pv.inner_m(g, &pv).sqrt();
        let den = v.inner_m(g, &v).sqrt();
        if den == 0.0 {
            return 0.0;
        }
        rho = num / den;
        let scale = 1.0 / num.max(f64::MIN_POSITIVE);
        v = pv.scale(scale);
    }
    rho
}

#[derive(Debug, Clone, Copy)]
pub struct LpFunctionalReport {
    /// Truncation index of the k-sum.
    pub k_terms: usize,
    /// Estimated L2 norm of the dropped tail, from the fitted analyticity
    /// decay of `||Delta P^k f||_2`.
    pub tail_estimate: f64,
}

/// Discrete Littlewood-Paley square functional
/// `g_gamma f(x) = (sum_{k=0}^{K} (k+1)^{1-2 gamma} |Delta P^k f(x)|^2)^{1/2}`.
///
/// The `k = 0` term carries weight `(k+1)^{1-2 gamma}` so the sum starts
/// without a `0^{1-2 gamma}` factor. The tail estimate is advisory, not a
/// failure: a short truncation is reported through the returned value.
pub fn lp_functional(
    g: &WeightedGraph,
    gamma: f64,
    f: &VertexFunction,
    k_max: usize,
) -> Result<(VertexFunction, LpFunctionalReport), OpError> {
    f.check_graph(g)?;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(OpError::GammaOutOfRange {
            gamma,
            range: "(0, 1)",
        });
    }
    let n = g.n_vertices();
    let mut sums = vec![0.0f64; n];
    let mut current = f.clone();
    let mut decay_constant = 0.0f64;
    for k in 0..=k_max {
        let next = apply_markov(g, &current)?;
        let delta_k = current.sub(&next); // Delta P^k f
        let weight = ((k + 1) as f64).powf(1.0 - 2.0 * gamma);
        for (s, d) in sums.iter_mut().zip(delta_k.values()) {
            *s += weight * d * d;
        }
        if k + 8 > k_max {
            let norm = lp_norm(g, &delta_k, 2.0)?;
            decay_constant = decay_constant.max(norm * (k + 1) as f64);
        }
        current = next;
    }
    // Tail of sum_k (k+1)^{1-2g} (C/(k+1))^2 beyond K, by integral comparison.
    let tail2 = decay_constant * decay_constant * (k_max as f64 + 1.0).powf(-2.0 * gamma)
        / (2.0 * gamma);
    let values = sums.into_iter().map(f64::sqrt).collect();
    Ok((
        VertexFunction::from_raw(g.id(), values),
        LpFunctionalReport {
            k_terms: k_max,
            tail_estimate: tail2.sqrt(),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::lp_norm;
    use crate::generate::lattice_box;
    use crate::graph::WeightedGraph;
    use crate::markov::laplacian_apply;
    use crate::spectral::{frac_power_spectral, spectral_decompose, DEFAULT_DENSE_CAP};
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_function(g: &WeightedGraph, seed: u64) -> VertexFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        VertexFunction::new(g, (0..g.n_vertices()).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .unwrap()
    }

    #[test]
    fn coefficient_law() {
        // a_n < 0 for n >= 1 and sum a_n = 0 when gamma > 0.
        let gamma = 0.37;
        let mut coeff = 1.0f64;
        let mut total = 1.0f64;
        for n in 1..200_000 {
            coeff *= (n as f64 - 1.0 - gamma) / n as f64;
            assert!(coeff < 0.0, "a_{n} = {coeff}");
            total += coeff;
        }
        assert!(total.abs() < 2e-2, "partial sum {total}");
        assert!(total > 0.0);
    }

    #[test]
    fn gamma_one_series_terminates() {
        let g = lattice_box(1, 4).unwrap().lazify(0.5).unwrap();
        let f = random_function(&g, 1).mean_zero(&g);
        let (result, report) = frac_power_binomial(&g, 1.0, &f, 1e-12, None, 100).unwrap();
        let exact = laplacian_apply(&g, &f).unwrap();
        // a_0 = 1, a_1 = -1, a_2 = 0: the series is exactly Delta.
        assert!(report.n_terms <= 2);
        for x in 0..g.n_vertices() {
            assert_relative_eq!(result.values()[x], exact.values()[x], epsilon = 1e-12);
        }
    }

    #[test]
    fn binomial_matches_spectral_on_lazy_path() {
        let g = lattice_box(1, 16).unwrap().lazify(0.5).unwrap();
        let dec = spectral_decompose(&g, DEFAULT_DENSE_CAP).unwrap();
        let band = SpectralBand {
            lambda_min: dec.spectral_gap() * 0.9,
            lambda_max: 1.0,
        };
        let f = random_function(&g, 2);
        let (series, report) =
            frac_power_binomial(&g, 0.5, &f, 1e-6, Some(band), 10_000_000).unwrap();
        let oracle = frac_power_spectral(&g, &dec, 0.5, &f).unwrap();
        let diff = series.sub(&oracle);
        assert!(lp_norm(&g, &diff, 2.0).unwrap() <= 1e-5);
        assert!(report.tail_bound <= 1e-6);
    }

    #[test]
    fn binomial_rejects_gamma_zero() {
        let g = lattice_box(1, 4).unwrap();
        let f = random_function(&g, 0);
        assert!(frac_power_binomial(&g, 0.0, &f, 1e-6, None, 100).is_err());
    }

    #[test]
    fn series_cap_reports_achieved_tail() {
        let g = lattice_box(1, 8).unwrap().lazify(0.5).unwrap();
        let f = random_function(&g, 4);
        match frac_power_binomial(&g, 0.3, &f, 1e-12, None, 10) {
            Err(OpError::SeriesTruncated { achieved_tail, .. }) => {
                assert!(achieved_tail > 1e-12);
            }
            other => panic!("expected truncation, got {other:?}"),
        }
    }

    #[test]
    fn radius_estimate_close_to_eigensolve() {
        let g = lattice_box(1, 10).unwrap().lazify(0.5).unwrap();
        let dec = spectral_decompose(&g, DEFAULT_DENSE_CAP).unwrap();
        let exact = (1.0 - dec.spectral_gap()).max(dec.lambda_max() - 1.0);
        let est = meanzero_radius_estimate(&g, 400, 9);
        assert!(est <= exact + 1e-9);
        assert!(est >= exact - 1e-3, "estimate {est} vs {exact}");
    }

    #[test]
    fn lp_functional_zero_on_constants() {
        let g = lattice_box(1, 6).unwrap().lazify(0.5).unwrap();
        let f = VertexFunction::constant(&g, 4.2);
        let (gf, _) = lp_functional(&g, 0.4, &f, 32).unwrap();
        for &v in gf.values() {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn lp_functional_eigenvector_closed_form() {
        let g = lattice_box(1, 8).unwrap().lazify(0.5).unwrap();
        let dec = spectral_decompose(&g, DEFAULT_DENSE_CAP).unwrap();
        let gamma = 0.3;
        let k_max = 4000;
        let i = dec.n() / 2;
        let lambda = dec.eigenvalues[i];
        let v = VertexFunction::new(&g, (0..dec.n()).map(|x| dec.eigenvectors[(x, i)]).collect())
            .unwrap();
        let (gv, _) = lp_functional(&g, gamma, &v, k_max).unwrap();
        // Scalar series: g_gamma v = |v| lambda (sum_k (k+1)^{1-2g} (1-lambda)^{2k})^{1/2}.
        let factor: f64 = (0..=k_max)
            .map(|k| ((k + 1) as f64).powf(1.0 - 2.0 * gamma) * (1.0 - lambda).powi(2 * k as i32))
            .sum::<f64>()
            .sqrt()
            * lambda;
        for x in 0..g.n_vertices() {
            assert_relative_eq!(gv.values()[x], v.values()[x].abs() * factor, epsilon = 1e-8);
        }
    }

    #[test]
    fn lp_functional_norm_equivalent_to_spectral_power() {
        let g = lattice_box(1, 12).unwrap().lazify(0.5).unwrap();
        let dec = spectral_decompose(&g, DEFAULT_DENSE_CAP).unwrap();
        let gamma = 0.5;
        let mut ratios = Vec::new();
        for seed in 0..8 {
            let f = random_function(&g, seed).mean_zero(&g);
            let (gf, _) = lp_functional(&g, gamma, &f, 20_000).unwrap();
            let power = frac_power_spectral(&g, &dec, gamma, &f).unwrap();
            let r = lp_norm(&g, &gf, 2.0).unwrap() / lp_norm(&g, &power, 2.0).unwrap();
            ratios.push(r);
        }
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0f64, f64::max);
        // Equivalence constants: bounded above and below across functions.
        assert!(lo > 0.1 && hi < 10.0, "ratios in [{lo}, {hi}]");
        assert!(hi / lo < 3.0, "spread {}", hi / lo);
    }
}
