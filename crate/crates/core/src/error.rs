use thiserror::Error;

/// Errors raised while constructing or validating a weighted graph.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate edge between vertices {u} and {v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("nonpositive weight {weight} on edge ({u}, {v})")]
    NonpositiveWeight { u: usize, v: usize, weight: f64 },
    #[error("vertex id {id} out of range for {n_vertices} vertices")]
    VertexOutOfRange { id: usize, n_vertices: usize },
    #[error("graph is disconnected: vertex {a} and vertex {b} lie in different components")]
    Disconnected { a: usize, b: usize },
    #[error("vertex {id} has zero measure")]
    ZeroMeasure { id: usize },
    #[error("laziness fraction {alpha} outside (0, 1)")]
    LazinessOutOfRange { alpha: f64 },
    #[error("no odd return path of length <= {max_len}; semigroup not certified analytic")]
    NotAnalytic { max_len: usize },
    #[error("generator would produce {requested} vertices, above the cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
}

/// Errors raised by operator application and fractional-power routines.
#[derive(Debug, Error)]
pub enum OpError {
    #[error("vertex function belongs to a different graph")]
    GraphMismatch,
    #[error("gamma = {gamma} outside the admissible range {range}")]
    GammaOutOfRange { gamma: f64, range: &'static str },
    #[error("Lp exponent p = {p} must be at least 1")]
    InvalidExponent { p: f64 },
    #[error("graph has {n_vertices} vertices, above the dense eigensolve cap {cap}; use the binomial route")]
    DenseCapExceeded { n_vertices: usize, cap: usize },
    #[error("eigendecomposition residual {residual} above {tol}")]
    EigenResidual { residual: f64, tol: f64 },
    #[error(
        "binomial series needs more than {max_terms} terms; achieved tail bound {achieved_tail}"
    )]
    SeriesTruncated { max_terms: usize, achieved_tail: f64 },
    #[error("heat columns are not consecutive steps from the same source")]
    MismatchedColumns,
    #[error("compute budget exceeded: {what}")]
    BudgetExceeded { what: String },
}

/// Errors raised by scaling fits and the exit-time solver.
#[derive(Debug, Error)]
pub enum FitError {
    #[error("need at least {needed} sample points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("scales must be strictly increasing and positive")]
    BadScales,
    #[error("radius {radius} saturates the graph (limit {limit})")]
    SaturatedRadius { radius: usize, limit: usize },
    #[error("ball({center}, {radius}) is not a proper subset of the vertex set")]
    BallNotProper { center: usize, radius: usize },
    #[error("linear solver did not converge: residual {residual} after {iterations} iterations")]
    SolverDiverged { residual: f64, iterations: usize },
    #[error("only {got} samples above the probability floor; need {needed}")]
    TooFewSamples { got: usize, needed: usize },
    #[error(transparent)]
    Op(#[from] OpError),
}

/// Errors raised while realizing witness functions or computing ratio fits.
#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("witness support at scale {scale} touches the boundary (eccentricity {eccentricity})")]
    TouchesBoundary { scale: usize, eccentricity: usize },
    #[error("degenerate ratio at scale {scale}: denominator {denominator} below floor {floor}")]
    DegenerateRatio { scale: usize, denominator: f64, floor: f64 },
    #[error("no eigenmode available in the requested band")]
    EmptyBand,
    #[error("function is not supported inside the ball of radius {radius}")]
    NotSupportedInBall { radius: usize },
    #[error(transparent)]
    Op(#[from] OpError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

/// Errors raised while reading or writing graph, function, and CSV files.
#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Errors raised while parsing experiment configuration files.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected `key = value`")]
    Malformed { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("missing required key `{key}`")]
    MissingKey { key: &'static str },
    #[error("key `{key}`: invalid value `{value}`: {reason}")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },
}

/// Errors surfaced by the pipeline orchestrator, tagged with the failing stage.
#[derive(Debug, Error)]
#[error("stage `{stage}` failed: {message}")]
pub struct PipelineError {
    pub stage: &'static str,
    pub message: String,
}

impl PipelineError {
    pub fn new(stage: &'static str, err: impl std::fmt::Display) -> Self {
        Self {
            stage,
            message: err.to_string(),
        }
    }
}
