//! Riesz and reverse-Riesz ratio computations, Poincare-type checks, failure
//! slope fits along witness families, and the (1/p, gamma) phase diagram.

use rayon::prelude::*;

use crate::error::{OpError, WitnessError};
use crate::fit::{fit_power_law, ScalingFit};
use crate::fracpow::{frac_power_binomial, lp_functional, SpectralBand};
use crate::function::{lp_norm, VertexFunction};
use crate::graph::{BallIndex, VertexId, WeightedGraph};
use crate::markov::gradient_length;
use crate::spectral::{frac_power_spectral, SpectralDecomposition};
use crate::witness::{
    eigenmode_band, heat_cutoff_witness, random_mean_zero, tent_witness, WitnessFamily,
};

/// Relative floor under which `||Delta^gamma f||_p` counts as degenerate.
pub const RATIO_FLOOR: f64 = 1e-12;
/// A family certifies growth when its fitted slope reaches this value.
pub const SLOPE_MIN: f64 = 0.1;
/// All families must stay within this slope for a `bounded` classification.
pub const SLOPE_EPS: f64 = 0.05;
/// Maximum log-residual for a growth fit to count as a clean power law.
pub const RESIDUAL_MAX: f64 = 0.5;

/// Route used to evaluate `Delta^gamma f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Dense eigendecomposition; exact up to eigensolve residual.
    Spectral,
    /// Binomial series in powers of P with a certified tail.
    Binomial,
    /// Littlewood-Paley square functional; norm-equivalent, not equal.
    LpFunctional,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Spectral => "spectral",
            Method::Binomial => "binomial",
            Method::LpFunctional => "lp-functional",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "spectral" => Some(Method::Spectral),
            "binomial" => Some(Method::Binomial),
            "lp-functional" | "lp_functional" => Some(Method::LpFunctional),
            _ => None,
        }
    }
}

/// Shared evaluation state for a method: the eigensystem (when affordable),
/// a spectral band for series tails, and truncation budgets.
#[derive(Clone, Copy)]
pub struct MethodContext<'a> {
    pub dec: Option<&'a SpectralDecomposition>,
    pub band: Option<SpectralBand>,
    pub series_tol: f64,
    pub series_max_terms: usize,
    pub lp_k_max: usize,
}

impl<'a> MethodContext<'a> {
    pub fn new() -> Self {
        Self {
            dec: None,
            band: None,
            series_tol: 1e-6,
            series_max_terms: 5_000_000,
            lp_k_max: 20_000,
        }
    }

    pub fn with_spectral(dec: &'a SpectralDecomposition) -> Self {
        let band = SpectralBand {
            lambda_min: dec.spectral_gap() * 0.99,
            lambda_max: dec.lambda_max() * 1.01,
        };
        Self {
            dec: Some(dec),
            band: Some(band),
            ..Self::new()
        }
    }
}

impl Default for MethodContext<'_> {
    fn default() -> Self {
        Self::new()
    }
}

/// `Delta^gamma f` (or its square-functional proxy) through the chosen route.
pub fn frac_power_by(
    g: &WeightedGraph,
    gamma: f64,
    f: &VertexFunction,
    method: Method,
    ctx: &MethodContext,
) -> Result<VertexFunction, OpError> {
    match method {
        Method::Spectral => {
            let dec = ctx.dec.ok_or(OpError::DenseCapExceeded {
                n_vertices: g.n_vertices(),
                cap: 0,
            })?;
            frac_power_spectral(g, dec, gamma, f)
        }
        Method::Binomial => {
            let (out, _) =
                frac_power_binomial(g, gamma, f, ctx.series_tol, ctx.band, ctx.series_max_terms)?;
            Ok(out)
        }
        Method::LpFunctional => {
            let (out, _) = lp_functional(g, gamma, f, ctx.lp_k_max)?;
            Ok(out)
        }
    }
}

/// `||grad f||_p / ||Delta^gamma f||_p` after m-mean removal. Exactly
/// homogeneous in f. Errors as degenerate when the denominator falls under
/// `RATIO_FLOOR` relative to `||f||_p`.
pub fn riesz_ratio(
    g: &WeightedGraph,
    f: &VertexFunction,
    p: f64,
    gamma: f64,
    method: Method,
    ctx: &MethodContext,
) -> Result<f64, WitnessError> {
    let f0 = f.mean_zero(g);
    let grad = gradient_length(g, &f0).map_err(WitnessError::Op)?;
    let numer = lp_norm(g, &grad, p).map_err(WitnessError::Op)?;
    let dgf = frac_power_by(g, gamma, &f0, method, ctx).map_err(WitnessError::Op)?;
    let denom = lp_norm(g, &dgf, p).map_err(WitnessError::Op)?;
    let floor = RATIO_FLOOR * lp_norm(g, &f0, p).map_err(WitnessError::Op)?;
    if denom <= floor {
        return Err(WitnessError::DegenerateRatio {
            scale: 0,
            denominator: denom,
            floor,
        });
    }
    Ok(numer / denom)
}

/// Realizes one witness of the family at the given scale (radius or time).
pub fn realize_witness(
    g: &WeightedGraph,
    family: WitnessFamily,
    anchor: VertexId,
    scale: usize,
    ctx: &MethodContext,
) -> Result<VertexFunction, WitnessError> {
    match family {
        WitnessFamily::Tent => tent_witness(g, anchor, scale),
        WitnessFamily::HeatCutoff { beta } => {
            Ok(heat_cutoff_witness(g, anchor, scale.max(2), beta)?.function)
        }
        WitnessFamily::RandomMeanZero { seed } => Ok(random_mean_zero(
            g,
            seed.wrapping_add((scale as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        )),
        WitnessFamily::EigenmodeBand {
            target,
            width,
            seed,
        } => {
            let dec = ctx.dec.ok_or(WitnessError::EmptyBand)?;
            let center = target / scale as f64;
            eigenmode_band(
                g,
                dec,
                center * (1.0 - width),
                center * (1.0 + width),
                seed.wrapping_add(scale as u64),
            )
        }
    }
}

/// Slope of `log(||Delta^gamma f||_p / ||grad f||_p)` against `log scale`
/// along a witness family. A positive slope certifies the growth of the best
/// reverse-inequality constant along this family.
pub fn failure_slope(
    g: &WeightedGraph,
    family: WitnessFamily,
    anchor: VertexId,
    scales: &[usize],
    p: f64,
    gamma: f64,
    method: Method,
    ctx: &MethodContext,
) -> Result<ScalingFit, WitnessError> {
    let mut sample = Vec::with_capacity(scales.len());
    for &scale in scales {
        let f = realize_witness(g, family, anchor, scale, ctx)?;
        let ratio = riesz_ratio(g, &f, p, gamma, method, ctx).map_err(|e| match e {
            WitnessError::DegenerateRatio {
                denominator, floor, ..
            } => WitnessError::DegenerateRatio {
                scale,
                denominator,
                floor,
            },
            other => other,
        })?;
        sample.push((scale as f64, 1.0 / ratio));
    }
    Ok(fit_power_law(&sample)?)
}

fn lp_norm_on(g: &WeightedGraph, f: &VertexFunction, p: f64, members: &[VertexId]) -> f64 {
    if p.is_infinite() {
        return members
            .iter()
            .fold(0.0f64, |acc, &x| acc.max(f.values()[x].abs()));
    }
    members
        .iter()
        .map(|&x| f.values()[x].abs().powf(p) * g.measure(x))
        .sum::<f64>()
        .powf(1.0 / p)
}

fn check_support(f: &VertexFunction, ball: &BallIndex) -> Result<(), WitnessError> {
    let mut inside = vec![false; f.len()];
    for &x in &ball.members {
        inside[x] = true;
    }
    if f.values()
        .iter()
        .zip(&inside)
        .any(|(&v, &inb)| v != 0.0 && !inb)
    {
        return Err(WitnessError::NotSupportedInBall {
            radius: ball.radius,
        });
    }
    Ok(())
}

/// One evaluation of the Poincare-type inequality
/// `||f||_{L^p(B)} <= C r^alpha ||grad f||_{L^p(B)}`.
#[derive(Debug, Clone, Copy)]
pub struct PoincareCheck {
    /// `||f||_{L^p(B)}`.
    pub lhs: f64,
    /// `r^alpha ||grad f||_{L^p(B)}`.
    pub rhs: f64,
    /// `lhs / rhs`, the constant this single function demands.
    pub ratio: f64,
}

/// Evaluates the Poincare ratio for one `f` supported in `ball`. The exponent
/// `alpha` is taken raw; callers decide whether to pass `alpha`, `beta gamma`,
/// or any other normalization.
pub fn check_poincare(
    g: &WeightedGraph,
    ball: &BallIndex,
    f: &VertexFunction,
    p: f64,
    alpha: f64,
) -> Result<PoincareCheck, WitnessError> {
    f.check_graph(g).map_err(WitnessError::Op)?;
    check_support(f, ball)?;
    let lhs = lp_norm_on(g, f, p, &ball.members);
    let grad = gradient_length(g, f).map_err(WitnessError::Op)?;
    let grad_norm = lp_norm_on(g, &grad, p, &ball.members);
    let rhs = (ball.radius.max(1) as f64).powf(alpha) * grad_norm;
    if rhs <= RATIO_FLOOR * lhs.max(1.0) {
        return Err(WitnessError::DegenerateRatio {
            scale: ball.radius,
            denominator: rhs,
            floor: RATIO_FLOOR,
        });
    }
    Ok(PoincareCheck {
        lhs,
        rhs,
        ratio: lhs / rhs,
    })
}

/// Ratio `||f||_p / (r^{alpha beta} ||Delta^alpha f||_p)` for `f` supported
/// in `ball`; stays bounded across r exactly when `beta` matches the true
/// escape exponent. `alpha = 0` returns 1 by the `Delta^0 = I` convention.
#[allow(clippy::too_many_arguments)]
pub fn check_ball_inequality(
    g: &WeightedGraph,
    ball: &BallIndex,
    f: &VertexFunction,
    p: f64,
    alpha: f64,
    beta: f64,
    method: Method,
    ctx: &MethodContext,
) -> Result<f64, WitnessError> {
    f.check_graph(g).map_err(WitnessError::Op)?;
    check_support(f, ball)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(WitnessError::Op(OpError::GammaOutOfRange {
            gamma: alpha,
            range: "[0, 1]",
        }));
    }
    if alpha == 0.0 {
        return Ok(1.0);
    }
    let numer = lp_norm(g, f, p).map_err(WitnessError::Op)?;
    let daf = frac_power_by(g, alpha, &f.mean_zero(g), method, ctx).map_err(WitnessError::Op)?;
    let denom =
        (ball.radius.max(1) as f64).powf(alpha * beta) * lp_norm(g, &daf, p).map_err(WitnessError::Op)?;
    if denom <= RATIO_FLOOR * numer.max(1.0) {
        return Err(WitnessError::DegenerateRatio {
            scale: ball.radius,
            denominator: denom,
            floor: RATIO_FLOOR,
        });
    }
    Ok(numer / denom)
}

/// The two directions of the gradient-vs-fractional-power comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// (R): `||grad f||_p <= C ||Delta^gamma f||_p`; grows when the Riesz
    /// ratio grows along a family.
    Riesz,
    /// (RR): `||Delta^gamma f||_p <= C ||grad f||_p`.
    ReverseRiesz,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Riesz => "R",
            Direction::ReverseRiesz => "RR",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Bounded,
    Growing,
    Inconclusive,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Bounded => "bounded",
            Classification::Growing => "growing",
            Classification::Inconclusive => "inconclusive",
        }
    }
}

/// Fitted slope for one family in one direction of one cell.
#[derive(Debug, Clone)]
pub struct FamilySlope {
    pub family: WitnessFamily,
    /// Slope of the log-ratio in this direction; NaN when degenerate.
    pub slope: f64,
    pub residual: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub p: f64,
    pub gamma: f64,
    pub direction: Direction,
    pub families: Vec<FamilySlope>,
    /// Worst-case (largest) growth slope across non-degenerate families.
    pub growth_slope: f64,
    pub classification: Classification,
}

#[derive(Debug, Clone)]
pub struct PhaseDiagram {
    pub cells: Vec<CellResult>,
}

/// Scan configuration: anchor, scale ladder, families, evaluation route, and
/// the classification thresholds.
pub struct ScanPlan<'a> {
    pub anchor: VertexId,
    pub scales: Vec<usize>,
    pub families: Vec<WitnessFamily>,
    pub method: Method,
    pub ctx: MethodContext<'a>,
    pub slope_min: f64,
    pub slope_eps: f64,
    pub residual_max: f64,
}

impl<'a> ScanPlan<'a> {
    pub fn new(anchor: VertexId, scales: Vec<usize>, families: Vec<WitnessFamily>) -> Self {
        Self {
            anchor,
            scales,
            families,
            method: Method::Binomial,
            ctx: MethodContext::new(),
            slope_min: SLOPE_MIN,
            slope_eps: SLOPE_EPS,
            residual_max: RESIDUAL_MAX,
        }
    }
}

fn classify(slopes: &[FamilySlope], slope_min: f64, slope_eps: f64, residual_max: f64) -> Classification {
    let live: Vec<&FamilySlope> = slopes.iter().filter(|s| !s.degenerate).collect();
    if live
        .iter()
        .any(|s| s.slope >= slope_min && s.residual <= residual_max)
    {
        return Classification::Growing;
    }
    if !live.is_empty() && live.iter().all(|s| s.slope.abs() <= slope_eps) {
        return Classification::Bounded;
    }
    Classification::Inconclusive
}

/// Sweeps the (p, gamma) grid. Witness functions and their fractional powers
/// are shared across cells (they do not depend on p), cells are evaluated in
/// parallel, and assembly order is the deterministic grid order.
pub fn phase_diagram(
    g: &WeightedGraph,
    p_grid: &[f64],
    gamma_grid: &[f64],
    plan: &ScanPlan,
) -> Result<PhaseDiagram, WitnessError> {
    // Realize each (family, scale) witness once: mean-zero projection, its
    // gradient length, and Delta^gamma for every gamma in the grid.
    struct Prepared {
        family: WitnessFamily,
        scale: f64,
        grad: VertexFunction,
        powers: Vec<Option<VertexFunction>>, // per gamma; None if failed
        f0_norm_hint: VertexFunction,
    }
    let mut prepared: Vec<Prepared> = Vec::new();
    for &family in &plan.families {
        for &scale in &plan.scales {
            let f = realize_witness(g, family, plan.anchor, scale, &plan.ctx)?;
            let f0 = f.mean_zero(g);
            let grad = gradient_length(g, &f0).map_err(WitnessError::Op)?;
            let powers: Vec<Option<VertexFunction>> = gamma_grid
                .par_iter()
                .map(|&gamma| frac_power_by(g, gamma, &f0, plan.method, &plan.ctx).ok())
                .collect();
            prepared.push(Prepared {
                family,
                scale: scale as f64,
                grad,
                powers,
                f0_norm_hint: f0,
            });
        }
    }

    let grid: Vec<(f64, f64)> = p_grid
        .iter()
        .flat_map(|&p| gamma_grid.iter().map(move |&gamma| (p, gamma)))
        .collect();

    let cell_pairs: Vec<[CellResult; 2]> = grid
        .par_iter()
        .map(|&(p, gamma)| {
            let gi = gamma_grid.iter().position(|&x| x == gamma).unwrap();
            let mut rr_slopes = Vec::with_capacity(plan.families.len());
            for &family in &plan.families {
                // Fit log(||Delta^gamma f|| / ||grad f||) over this family's
                // scales; any degenerate scale poisons the family for this cell.
                let mut sample: Vec<(f64, f64)> = Vec::new();
                let mut degenerate = false;
                for prep in prepared.iter().filter(|q| q.family == family) {
                    let numer = match &prep.powers[gi] {
                        Some(dgf) => lp_norm(g, dgf, p).unwrap_or(f64::NAN),
                        None => {
                            degenerate = true;
                            break;
                        }
                    };
                    let denom = lp_norm(g, &prep.grad, p).unwrap_or(f64::NAN);
                    let floor =
                        RATIO_FLOOR * lp_norm(g, &prep.f0_norm_hint, p).unwrap_or(f64::NAN);
                    if !(numer > floor) || !(denom > floor) {
                        degenerate = true;
                        break;
                    }
                    sample.push((prep.scale, numer / denom));
                }
                let fit = if degenerate {
                    None
                } else {
                    fit_power_law(&sample).ok()
                };
                match fit {
                    Some(fit) => rr_slopes.push(FamilySlope {
                        family,
                        slope: fit.exponent,
                        residual: fit.residual,
                        degenerate: false,
                    }),
                    None => rr_slopes.push(FamilySlope {
                        family,
                        slope: f64::NAN,
                        residual: f64::NAN,
                        degenerate: true,
                    }),
                }
            }
            let r_slopes: Vec<FamilySlope> = rr_slopes
                .iter()
                .map(|s| FamilySlope {
                    family: s.family,
                    slope: -s.slope,
                    residual: s.residual,
                    degenerate: s.degenerate,
                })
                .collect();
            let worst = |slopes: &[FamilySlope]| {
                slopes
                    .iter()
                    .filter(|s| !s.degenerate)
                    .map(|s| s.slope)
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            let make = |direction: Direction, slopes: Vec<FamilySlope>| CellResult {
                p,
                gamma,
                direction,
                growth_slope: worst(&slopes),
                classification: classify(
                    &slopes,
                    plan.slope_min,
                    plan.slope_eps,
                    plan.residual_max,
                ),
                families: slopes,
            };
            [
                make(Direction::Riesz, r_slopes),
                make(Direction::ReverseRiesz, rr_slopes),
            ]
        })
        .collect();

    Ok(PhaseDiagram {
        cells: cell_pairs.into_iter().flatten().collect(),
    })
}

/// Theorem region i: (R_{p,gamma}) holds when `gamma <= min(1/2, 1/p)`.
pub fn theorem_riesz_holds(p: f64, gamma: f64) -> bool {
    gamma <= (0.5f64).min(1.0 / p)
}

/// Theorem region ii: (RR_{p,gamma}) holds when `gamma >= max(1/2, 1/p)`.
pub fn theorem_reverse_holds(p: f64, gamma: f64) -> bool {
    gamma >= (0.5f64).max(1.0 / p)
}

/// Theorem region iii: (RR_{p,gamma}) fails when
/// `gamma < min(max(1/p, 1/beta), 1/beta + (1/p)(1 - 2/beta))`.
pub fn theorem_reverse_fails(p: f64, gamma: f64, beta: f64) -> bool {
    let ip = 1.0 / p;
    let ib = 1.0 / beta;
    gamma < (ip.max(ib)).min(ib + ip * (1.0 - 2.0 * ib))
}

/// Theorem region iv: (R_{p,gamma}) fails when
/// `gamma > max(min(1/p, 1 - 1/beta), 1/beta + (1/p)(1 - 2/beta))`.
pub fn theorem_riesz_fails(p: f64, gamma: f64, beta: f64) -> bool {
    let ip = 1.0 / p;
    let ib = 1.0 / beta;
    gamma > (ip.min(1.0 - ib)).max(ib + ip * (1.0 - 2.0 * ib))
}
