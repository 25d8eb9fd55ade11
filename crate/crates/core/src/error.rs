use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator dimension {0} is not a supported power of two (2..=16)")]
    InvalidDimension(usize),

    #[error("tensor product dimension {0} exceeds the supported maximum of 16")]
    DimensionOverflow(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix data has {got} entries, expected {expected}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    NotNormalized(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("cannot trace out a qubit of a single-qubit state")]
    SingleQubit,

    #[error("qubit count {0} outside the supported range 1..=4")]
    InvalidQubitCount(usize),

    #[error("gamma = {0} outside [0, π/2]")]
    InvalidGamma(f64),

    #[error("payoff table requires 0 < p < q < n, got p={p}, q={q}, n={n}")]
    InvalidPayoffTable { p: f64, q: f64, n: f64 },

    #[error("corruption x = {0} outside [0, 1]")]
    InvalidCorruption(f64),

    #[error("outcome probability {0:e} is negative beyond rounding slack")]
    NegativeProbability(f64),

    #[error("invalid strategy profile '{0}': expected three letters from I, H, X")]
    InvalidProfile(String),

    #[error("no consistent class labelling: {0}")]
    InconsistentLabels(String),

    #[error("class labelling is defined against the reference table (p, q, n) = (1, 2, 9)")]
    NonReferenceTable,

    #[error("tomography tensor has t[I,I,I] = {0}, expected 1")]
    TensorTrace(f64),

    #[error("expectation value has imaginary residue {0:e}")]
    ComplexExpectation(f64),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("unknown reference state '{0}'")]
    UnknownFixture(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
