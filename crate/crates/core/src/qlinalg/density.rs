use num_complex::Complex64;

use super::eigen::{eigh, PSD_SLACK};
use super::{Operator, STRUCTURE_TOL};
use crate::error::{Error, Result};

/// A density matrix on 1 to 4 qubits.
///
/// Physical states are Hermitian, unit-trace and positive semidefinite. A
/// *raw* state only promises a square matrix of the right size; it is what
/// linear-inversion tomography and transcribed experimental data produce.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    matrix: Operator,
    raw: bool,
}

fn qubits_of(matrix: &Operator) -> Result<usize> {
    let q = matrix.qubits();
    if (1..=4).contains(&q) {
        Ok(q)
    } else {
        Err(Error::InvalidQubitCount(q))
    }
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: Operator) -> Result<Self> {
        let qubits = qubits_of(&matrix)?;
        let dev = matrix.hermiticity_deviation();
        if dev > STRUCTURE_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STRUCTURE_TOL || tr.im.abs() > STRUCTURE_TOL {
            return Err(Error::NotNormalized(tr.re));
        }
        let min = eigh(&matrix)?.values[0];
        if min < -PSD_SLACK {
            return Err(Error::NotPositive(min));
        }
        Ok(Self {
            qubits,
            matrix,
            raw: false,
        })
    }

    /// Wraps a matrix without any physical validation.
    pub fn raw(matrix: Operator) -> Result<Self> {
        let qubits = qubits_of(&matrix)?;
        Ok(Self {
            qubits,
            matrix,
            raw: true,
        })
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::NotNormalized(norm));
        }
        let matrix = Operator::outer(psi, psi)?;
        qubits_of(&matrix)?;
        Ok(Self {
            qubits: matrix.qubits(),
            matrix,
            raw: false,
        })
    }

    /// Computational basis state `|index⟩⟨index|`.
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        if !(1..=4).contains(&qubits) {
            return Err(Error::InvalidQubitCount(qubits));
        }
        let matrix = Operator::basis_projector(1 << qubits, index)?;
        Ok(Self {
            qubits,
            matrix,
            raw: false,
        })
    }

    /// Diagonal state with the given populations (must be a probability vector).
    pub fn from_populations(populations: &[f64]) -> Result<Self> {
        if let Some(&bad) = populations.iter().find(|&&p| p < 0.0) {
            return Err(Error::NotPositive(bad));
        }
        let total: f64 = populations.iter().sum();
        if (total - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::NotNormalized(total));
        }
        let diag: Vec<Complex64> = populations
            .iter()
            .map(|&p| Complex64::new(p, 0.0))
            .collect();
        let matrix = Operator::diagonal(&diag)?;
        Ok(Self {
            qubits: qubits_of(&matrix)?,
            matrix,
            raw: false,
        })
    }

    /// Maximally mixed state `I / 2^qubits`.
    pub fn maximally_mixed(qubits: usize) -> Result<Self> {
        if !(1..=4).contains(&qubits) {
            return Err(Error::InvalidQubitCount(qubits));
        }
        let d = 1usize << qubits;
        Self::from_populations(&vec![1.0 / d as f64; d])
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Operator {
        &self.matrix
    }

    pub fn into_matrix(self) -> Operator {
        self.matrix
    }

    pub fn is_raw(&self) -> bool {
        self.raw
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix.get(row, col)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.matrix.hermiticity_deviation()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eigh(&self.matrix.hermitian_part())?.values[0])
    }

    /// Populations `⟨k|ρ|k⟩` (real parts of the diagonal).
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.get(k, k).re).collect()
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation_in(&self, psi: &[Complex64]) -> Result<Complex64> {
        let rho_psi = self.matrix.apply(psi)?;
        Ok(psi.iter().zip(&rho_psi).map(|(a, b)| a.conj() * b).sum())
    }

    /// Same state with the raw flag cleared if the matrix passes physical validation.
    pub fn validated(self) -> Result<Self> {
        Self::new(self.matrix)
    }

    pub(crate) fn with_matrix(&self, matrix: Operator) -> Result<Self> {
        Ok(Self {
            qubits: qubits_of(&matrix)?,
            matrix,
            raw: self.raw,
        })
    }
}

/// `U·ρ·U†`. Physical inputs stay physical; raw inputs stay raw.
pub fn conjugate_by(u: &Operator, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if u.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(u.dim(), rho.dim()));
    }
    let out = u.matmul(rho.matrix())?.matmul(&u.dagger())?;
    rho.with_matrix(out)
}

/// Traces out the last (least significant) qubit.
pub fn partial_trace_last(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.qubits() < 2 {
        return Err(Error::SingleQubit);
    }
    let d = rho.dim() / 2;
    let m = rho.matrix();
    let reduced = Operator::from_fn(d, |i, j| m.get(2 * i, 2 * j) + m.get(2 * i + 1, 2 * j + 1))?;
    rho.with_matrix(reduced)
}
