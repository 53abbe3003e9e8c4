use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid strand count {0} (need n >= 2)")]
    InvalidStrandCount(usize),
    #[error("index {index} out of range 1..={size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("matrix is not skew-symmetric at ({i}, {j})")]
    NotSkew { i: usize, j: usize },
    #[error("degenerate seed: division by zero at x_{index}")]
    DivisionByZero { index: usize },
    #[error("singular y-variable at y_{index} (0 or -1)")]
    SingularY { index: usize },
    #[error("parse error at token {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("braid closure has {components} components; only knots are supported")]
    MultiComponent { components: usize },
    #[error("degenerate trajectory at step {step}: {source}")]
    DegenerateStep { step: usize, source: Box<Error> },
    #[error("degenerate modulus for tetrahedron {label}")]
    DegenerateModulus { label: char },
    #[error("non-integral flattening for tetrahedron {label}: residual {residual:.3e}")]
    Flattening { label: char, residual: f64 },
    #[error("crossing {crossing}: {source}")]
    Crossing { crossing: usize, source: Box<Error> },
    #[error("Newton failed: {0}")]
    Newton(String),
    #[error("singular Jacobian (condition estimate {cond:.3e})")]
    SingularJacobian { cond: f64 },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Error {
        Error::DegenerateStep { step, source: Box::new(self) }
    }
}
