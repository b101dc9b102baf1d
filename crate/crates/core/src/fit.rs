//! Log-log least-squares fits for power-law exponents.

use crate::error::FitError;

/// Result of a log-log regression `log value ~ exponent * log scale + intercept`.
#[derive(Debug, Clone)]
pub struct ScalingFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Max absolute residual in log units; always reported.
    pub residual: f64,
    pub sample: Vec<(f64, f64)>,
}

/// Fits a power law to `(scale, value)` pairs. Scales need not be distinct
/// (pooled fits repeat scales across centers) but must be positive, cover at
/// least `min_points` samples, and at least 4 distinct scales in
/// nondecreasing order.
pub fn fit_power_law(sample: &[(f64, f64)]) -> Result<ScalingFit, FitError> {
    const MIN_POINTS: usize = 4;
    if sample.len() < MIN_POINTS {
        return Err(FitError::TooFewPoints {
            needed: MIN_POINTS,
            got: sample.len(),
        });
    }
    let mut distinct: Vec<f64> = sample.iter().map(|&(s, _)| s).collect();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    if distinct.len() < MIN_POINTS {
        return Err(FitError::TooFewPoints {
            needed: MIN_POINTS,
            got: distinct.len(),
        });
    }
    if sample.iter().any(|&(s, v)| s <= 0.0 || v <= 0.0 || !v.is_finite()) {
        return Err(FitError::BadScales);
    }

    let logs: Vec<(f64, f64)> = sample.iter().map(|&(s, v)| (s.ln(), v.ln())).collect();
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|&(x, _)| x).sum();
    let sy: f64 = logs.iter().map(|&(_, y)| y).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| x * x).sum();
    let sxy: f64 = logs.iter().map(|&(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let exponent = (n * sxy - sx * sy) / denom;
    let intercept = (sy - exponent * sx) / n;
    let residual = logs
        .iter()
        .map(|&(x, y)| (y - exponent * x - intercept).abs())
        .fold(0.0f64, f64::max);
    Ok(ScalingFit {
        exponent,
        intercept,
        residual,
        sample: sample.to_vec(),
    })
}

/// Geometric scale ladder in `[lo, hi]`, distinct integers.
pub fn geometric_radii(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    if hi <= lo || count == 0 {
        return vec![lo];
    }
    let ratio = (hi as f64 / lo as f64).powf(1.0 / (count.saturating_sub(1).max(1)) as f64);
    let mut out: Vec<usize> = (0..count)
        .map(|i| ((lo as f64) * ratio.powi(i as i32)).round() as usize)
        .collect();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_power_law_recovered() {
        let sample: Vec<(f64, f64)> = (1..=8).map(|r| (r as f64, 3.0 * (r as f64).powf(1.7))).collect();
        let fit = fit_power_law(&sample).unwrap();
        assert_relative_eq!(fit.exponent, 1.7, epsilon = 1e-10);
        assert_relative_eq!(fit.intercept, 3.0f64.ln(), epsilon = 1e-10);
        assert!(fit.residual < 1e-10);
    }

    #[test]
    fn too_few_points_rejected() {
        let sample = vec![(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)];
        assert!(matches!(
            fit_power_law(&sample),
            Err(FitError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn too_few_distinct_scales_rejected() {
        let sample = vec![(1.0, 1.0), (1.0, 1.1), (2.0, 2.0), (2.0, 2.1), (3.0, 3.0)];
        assert!(fit_power_law(&sample).is_err());
    }

    #[test]
    fn nonpositive_rejected() {
        let sample = vec![(1.0, 1.0), (2.0, 0.0), (3.0, 3.0), (4.0, 4.0)];
        assert!(matches!(fit_power_law(&sample), Err(FitError::BadScales)));
    }

    #[test]
    fn geometric_ladder() {
        let r = geometric_radii(4, 64, 5);
        assert_eq!(r, vec![4, 8, 16, 32, 64]);
    }
}
