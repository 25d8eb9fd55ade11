//! Dense complex linear algebra for operators of at most four qubits.
//!
//! Everything here is small (≤ 16×16) and immutable once built. Matrices are
//! stored row-major; qubit 0 is the most significant bit of a basis index.

mod density;
mod eigen;
pub mod gates;
mod operator;

pub use density::{conjugate_by, partial_trace_last, DensityMatrix};
pub use eigen::{eigh, herm_sqrt, HermSqrt, HermitianEigen, PSD_SLACK};
pub use operator::{equal_up_to_global_phase, global_phase_distance, kron, Operator, MAX_DIM};

/// Complex scalar used for every matrix entry.
pub type ComplexScalar = num_complex::Complex64;

/// Tolerance for structural checks (Hermiticity, unit trace, unitarity).
pub const STRUCTURE_TOL: f64 = 1e-12;
