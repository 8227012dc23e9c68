use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid point set: {0}")]
    InvalidPointSet(String),

    #[error("color {color} out of range 1..={num_colors}")]
    ColorOutOfRange { color: u32, num_colors: usize },

    #[error("weight system has {got} weights, point set has {expected} colors")]
    WeightMismatch { expected: usize, got: usize },

    #[error("window underflow: support of the test function leaves the generated window")]
    WindowUnderflow,

    #[error("lag exceeds window: lag {lag} requires an eroded window but the window edge is {edge}")]
    LagExceedsWindow { lag: f64, edge: f64 },

    #[error("seed not self-prolongable: {0}")]
    SeedNotSelfProlongable(String),

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("unexpected symbol {0}")]
    UnexpectedSymbol(u32),

    #[error("degenerate lattice basis (determinant {0})")]
    DegenerateBasis(f64),

    #[error("singular weight system: {0}")]
    SingularWeightSystem(String),

    #[error("autocorrelation support is not of finite local complexity ({clusters} displacement clusters, bound {bound})")]
    NonFiniteLocalComplexity { clusters: usize, bound: usize },

    #[error("negative intensity {value} at k = {k:?}")]
    NegativeIntensity { k: Vec<f64>, value: f64 },

    #[error("mismatched source sets")]
    MismatchedSources,

    #[error("weighted input: this operation requires unit weights")]
    WeightedInput,

    #[error("pattern too large for window: reach {reach} exceeds a quarter of the window edge {edge}")]
    PatternTooLarge { reach: f64, edge: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
