use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("symmetry error: {0}")]
    Symmetry(String),

    #[error("degenerate plane: Gram determinant {0:e}")]
    DegeneratePlane(f64),

    #[error("mesh quality error: {0}")]
    MeshQuality(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("curvature validation failed: {0}")]
    Validation(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
