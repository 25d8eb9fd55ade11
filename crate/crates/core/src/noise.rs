//! Corrupted source: with probability `x` the umpire emits `|111⟩` instead of `|000⟩`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qlinalg::{gates, partial_trace_last, DensityMatrix};

/// Corruption probability `x ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorruptionModel {
    x: f64,
}

impl CorruptionModel {
    pub fn new(x: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&x) {
            Ok(Self { x })
        } else {
            Err(Error::InvalidCorruption(x))
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }
}

/// `(1−x)|000⟩⟨000| + x|111⟩⟨111|`.
pub fn corrupted_input(model: CorruptionModel) -> DensityMatrix {
    let mut pops = [0.0; 8];
    pops[0] = 1.0 - model.x;
    pops[7] = model.x;
    DensityMatrix::from_populations(&pops).expect("valid probability vector")
}

/// Ancilla angle with `x = sin²(θ/2)`, i.e. `θ = 2·asin(√x) ∈ [0, π]`.
pub fn theta_for_x(x: f64) -> Result<f64> {
    let x = CorruptionModel::new(x)?.x();
    Ok(2.0 * x.sqrt().asin())
}

/// Prepares the corrupted source with an ancilla circuit.
///
/// The ancilla is the fourth (least significant) qubit. It is rotated by
/// `U(θ, 0, 0)`, then used as control for CNOTs onto each game qubit, and
/// finally traced out. The four-qubit register stays a state vector until the
/// trace.
pub fn ancilla_prepare(x: f64) -> Result<DensityMatrix> {
    let theta = theta_for_x(x)?;
    let mut psi = vec![Complex64::new(0.0, 0.0); 16];
    psi[0] = Complex64::new(1.0, 0.0);
    psi = gates::on_qubit(4, 3, &gates::u3(theta, 0.0, 0.0))?.apply(&psi)?;
    for target in 0..3 {
        psi = gates::cnot(4, 3, target)?.apply(&psi)?;
    }
    // Renormalize away the last-ulp drift of cos² + sin².
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    psi.iter_mut().for_each(|z| *z /= norm);
    partial_trace_last(&DensityMatrix::pure(&psi)?)
}
