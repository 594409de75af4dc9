use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The spectral parameter lies on (or within 1e-12 of) a branch cut.
    #[error("λ = {lambda} lies on the cut [-{half_width}, {half_width}]")]
    OnCut { lambda: Complex64, half_width: f64 },

    #[error("λ = {lambda} is (numerically) a pole: {detail}")]
    Pole { lambda: Complex64, detail: String },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("operator is not a contraction (norm {norm})")]
    NotContraction { norm: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    /// `-iy M(iy)` has no finite limit (linear term present).
    #[error("asymptotic limit is unbounded: linear coefficient B is nonzero")]
    Unbounded,

    #[error("t = {t} is outside the covered range [0, {end}]")]
    OutOfRange { t: f64, end: f64 },

    #[error("degenerate Kac step at j = {step}")]
    DegenerateStep { step: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("transfer-matrix determinant drifted by {drift:e}")]
    DeterminantDrift { drift: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
