use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structure(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid boundary conditions: {0}")]
    InvalidConditions(String),
    #[error("matrix A + ikB is singular at k = {0}")]
    Singular(Complex64),
    #[error("linear system is singular at k = {0}")]
    SingularSystem(Complex64),
    #[error("pole near k = {k}: relative residual {residual:e}")]
    Pole { k: Complex64, residual: f64 },
    #[error("graph has symbolic lengths; concretize before numeric evaluation")]
    Symbolic,
    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),
    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("boundary conditions are not local on this graph")]
    NotLocal,
    #[error("boundary conditions are not H-parametrized (B is singular)")]
    NotHParametrized,
    #[error("walk does not belong to the graph: {0}")]
    WalkMismatch(String),
    #[error("classification failed: {0}")]
    Classification(String),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
