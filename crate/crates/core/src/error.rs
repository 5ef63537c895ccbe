use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index {index} is out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("index set {0:?} is not strictly increasing and 1-based")]
    BadIndexSet(Vec<usize>),

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("matrix is defective: eigenvector matrix has condition {0:.3e}")]
    Defective(f64),

    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not skew-Hermitian (residual {0:.3e})")]
    NotSkewHermitian(f64),

    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix has complex entries (largest imaginary part {0:.3e})")]
    NotReal(f64),

    #[error("exhaustive minor enumeration supports n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },

    #[error("invalid permutation {0:?}")]
    BadPermutation(Vec<usize>),

    #[error("{0}")]
    Precondition(String),

    #[error("point lies outside the domain: {0}")]
    OutsideDomain(String),

    #[error("rank is ambiguous at the working tolerance: {0}")]
    AmbiguousRank(String),

    #[error("drift tolerance {tol:.1e} not reached down to step {step:.1e}")]
    DriftUnreachable { tol: f64, step: f64 },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("invalid JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
