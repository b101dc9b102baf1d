//! A numerical laboratory for harmonic analysis on fractal-type weighted
//! graphs with slow diffusion.
//!
//! The crate builds Vicsek, Sierpinski-gasket, and lattice-box graphs,
//! exposes their Markov operator, Laplacian, gradient length, and fractional
//! Laplacian powers (dense spectral, binomial series, and Littlewood-Paley
//! routes), and measures the scaling laws that govern them: volume growth,
//! escape rates, sub-Gaussian heat-kernel collapse, and the validity regions
//! of the Riesz and reverse-Riesz inequalities over the (1/p, gamma) plane.
//!
//! Start with [`generate::generate`] to build a graph, [`spectral`] or
//! [`fracpow`] for operator calculus, [`scaling`] for exponent fits, and
//! [`riesz::phase_diagram`] for the full inequality scan. The `examples/`
//! directory contains one runnable walkthrough per capability, and the
//! `subgauss` binary wraps the same entry points as subcommands.

pub mod config;
pub mod error;
pub mod fit;
pub mod fracpow;
pub mod function;
pub mod generate;
pub mod graph;
pub mod io;
pub mod markov;
pub mod pipeline;
pub mod riesz;
pub mod scaling;
pub mod solver;
pub mod spectral;
pub mod witness;

pub use config::{parse_config, parse_config_str, ExperimentConfig, FamilyKind};
pub use error::{ConfigError, FitError, GraphError, IoError, OpError, PipelineError, WitnessError};
pub use fit::{fit_power_law, geometric_radii, ScalingFit};
pub use fracpow::{frac_power_binomial, lp_functional, SpectralBand};
pub use function::{lp_norm, VertexFunction};
pub use generate::{generate, Family, GeneratorSpec};
pub use graph::{BallIndex, VertexId, WeightedGraph};
pub use markov::{apply_markov, gradient_length, heat_column, laplacian_apply};
pub use pipeline::{run_pipeline, PipelineOutput};
pub use riesz::{
    failure_slope, phase_diagram, riesz_ratio, Classification, Direction, Method, MethodContext,
    PhaseDiagram, ScanPlan,
};
pub use scaling::{escape_time, fit_escape_exponent, fit_volume_growth, verify_dkue, verify_ue_shape};
pub use spectral::{frac_power_spectral, spectral_decompose, SpectralDecomposition};
pub use witness::{heat_cutoff_witness, random_mean_zero, tent_witness, WitnessFamily};
