//! Standard gates and helpers to embed them in multi-qubit registers.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::Operator;
use crate::error::{Error, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity() -> Operator {
    Operator::identity(2)
}

pub fn pauli_x() -> Operator {
    Operator::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn pauli_y() -> Operator {
    Operator::new(2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap()
}

pub fn pauli_z() -> Operator {
    Operator::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

pub fn hadamard() -> Operator {
    let h = FRAC_1_SQRT_2;
    Operator::from_real(2, &[h, h, h, -h]).unwrap()
}

/// Pauli basis element by index: 0 → I, 1 → σx, 2 → σy, 3 → σz.
///
/// # Panics
/// If `index > 3`.
pub fn pauli(index: usize) -> Operator {
    match index {
        0 => identity(),
        1 => pauli_x(),
        2 => pauli_y(),
        3 => pauli_z(),
        _ => panic!("pauli index {index} out of range"),
    }
}

/// `R_x(φ) = cos(φ/2)·I − i·sin(φ/2)·X`, so `R_x(−π/2)|0⟩ = (|0⟩ + i|1⟩)/√2`.
pub fn rx(angle: f64) -> Operator {
    let (s, co) = (angle / 2.0).sin_cos();
    Operator::new(2, vec![c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)]).unwrap()
}

/// General single-qubit unitary
/// `[[cos(θ/2), −e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(λ+φ)} cos(θ/2)]]`.
pub fn u3(theta: f64, phi: f64, lambda: f64) -> Operator {
    let (s, co) = (theta / 2.0).sin_cos();
    Operator::new(
        2,
        vec![
            c(co, 0.0),
            -Complex64::from_polar(s, lambda),
            Complex64::from_polar(s, phi),
            Complex64::from_polar(co, lambda + phi),
        ],
    )
    .unwrap()
}

/// Places the single-qubit `gate` on `qubit` of an `n`-qubit register.
pub fn on_qubit(n: usize, qubit: usize, gate: &Operator) -> Result<Operator> {
    if gate.dim() != 2 {
        return Err(Error::DimensionMismatch(gate.dim(), 2));
    }
    if qubit >= n {
        return Err(Error::InvalidQubitCount(qubit + 1));
    }
    let mut acc: Option<Operator> = None;
    for k in 0..n {
        let factor = if k == qubit { gate.clone() } else { identity() };
        acc = Some(match acc {
            None => factor,
            Some(a) => a.kron(&factor)?,
        });
    }
    acc.ok_or(Error::InvalidQubitCount(n))
}

/// CNOT on an `n`-qubit register, flipping `target` when `control` is 1.
pub fn cnot(n: usize, control: usize, target: usize) -> Result<Operator> {
    if control >= n || target >= n || control == target || n == 0 {
        return Err(Error::InvalidQubitCount(n));
    }
    let dim = 1usize << n;
    let cbit = 1usize << (n - 1 - control);
    let tbit = 1usize << (n - 1 - target);
    Operator::from_fn(dim, |row, col| {
        let image = if col & cbit != 0 { col ^ tbit } else { col };
        if row == image {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn single_qubit_gates_are_unitary() {
        for g in [
            identity(),
            pauli_x(),
            pauli_y(),
            pauli_z(),
            hadamard(),
            rx(0.3),
            u3(1.1, 0.4, -2.0),
        ] {
            assert!(g.is_unitary(1e-12));
        }
    }

    #[test]
    fn rx_minus_half_pi_on_zero() {
        let out = rx(-FRAC_PI_2).apply(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((out[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((out[1] - c(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn u3_special_points() {
        assert!(u3(0.0, 0.0, 0.0).max_abs_diff(&identity()) < 1e-15);
        // θ=π, λ=π: [[0, 1], [1, 0]] since −e^{iπ} = 1 and e^{iπ}·cos(π/2) = 0.
        assert!(u3(PI, 0.0, PI).max_abs_diff(&pauli_x()) < 1e-15);
    }

    #[test]
    fn cnot_endianness_on_three_qubits() {
        // control qubit 1 (middle bit), target qubit 0 (leftmost bit): |010⟩ → |110⟩.
        let g = cnot(3, 1, 0).unwrap();
        assert_eq!(g.get(0b110, 0b010), c(1.0, 0.0));
        assert_eq!(g.get(0b011, 0b011), c(0.0, 0.0));
        assert_eq!(g.get(0b111, 0b011), c(1.0, 0.0));
        assert_eq!(g.get(0b001, 0b001), c(1.0, 0.0));
        assert!(g.is_unitary(0.0));
    }

    #[test]
    fn on_qubit_places_gate() {
        let g = on_qubit(3, 0, &pauli_x()).unwrap();
        assert_eq!(g.get(0b100, 0b000), c(1.0, 0.0));
        assert!(on_qubit(3, 3, &pauli_x()).is_err());
    }
}
