//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use num_complex::Complex64;

use super::Operator;
use crate::error::{Error, Result};

/// Eigenvalues in `[−PSD_SLACK, 0)` are treated as rounding and clamped silently.
pub const PSD_SLACK: f64 = 1e-10;

const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;
const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues (ascending) and the unitary whose columns are the eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Operator,
}

impl HermitianEigen {
    /// Rebuilds `V·diag(f(λ))·V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Operator {
        let d = self.values.len();
        let mapped: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        Operator::from_fn(d, |i, j| {
            (0..d)
                .map(|k| self.vectors.get(i, k) * mapped[k] * self.vectors.get(j, k).conj())
                .sum()
        })
        .expect("same dimension")
    }
}

fn off_diagonal_norm(a: &[Complex64], d: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a[i * d + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes a Hermitian operator.
///
/// The input is symmetrized to its Hermitian part after the Hermiticity check,
/// so rounding asymmetry never leaks into the eigenvalues.
pub fn eigh(a: &Operator) -> Result<HermitianEigen> {
    let scale = a.max_abs().max(1.0);
    let dev = a.hermiticity_deviation();
    if dev > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(dev));
    }
    let d = a.dim();
    let mut m: Vec<Complex64> = a.hermitian_part().entries().to_vec();
    let mut v: Vec<Complex64> = Operator::identity(d).entries().to_vec();
    let threshold = OFF_DIAGONAL_TOL * a.frobenius_norm().max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m, d) <= threshold {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = m[p * d + q];
                let r = apq.norm();
                if r < f64::MIN_POSITIVE {
                    continue;
                }
                // W = diag(1, e^{-iφ}) · [[c, s], [-s, c]] zeroes the (p, q) entry of W†·M·W.
                let phase = (apq / r).conj();
                let app = m[p * d + p].re;
                let aqq = m[q * d + q].re;
                let theta = 0.5 * (2.0 * r).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                let w00 = Complex64::new(c, 0.0);
                let w01 = Complex64::new(s, 0.0);
                let w10 = phase * -s;
                let w11 = phase * c;

                for k in 0..d {
                    let mkp = m[k * d + p];
                    let mkq = m[k * d + q];
                    m[k * d + p] = mkp * w00 + mkq * w10;
                    m[k * d + q] = mkp * w01 + mkq * w11;
                    let vkp = v[k * d + p];
                    let vkq = v[k * d + q];
                    v[k * d + p] = vkp * w00 + vkq * w10;
                    v[k * d + q] = vkp * w01 + vkq * w11;
                }
                for k in 0..d {
                    let mpk = m[p * d + k];
                    let mqk = m[q * d + k];
                    m[p * d + k] = w00.conj() * mpk + w10.conj() * mqk;
                    m[q * d + k] = w01.conj() * mpk + w11.conj() * mqk;
                }
                m[p * d + q] = Complex64::new(0.0, 0.0);
                m[q * d + p] = Complex64::new(0.0, 0.0);
                m[p * d + p].im = 0.0;
                m[q * d + q].im = 0.0;
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| m[i * d + i].re.total_cmp(&m[j * d + j].re));
    let values = order.iter().map(|&i| m[i * d + i].re).collect();
    let vectors = Operator::from_fn(d, |row, col| v[row * d + order[col]])?;
    Ok(HermitianEigen { values, vectors })
}

/// Square root of a Hermitian operator with negative eigenvalues clamped to zero.
#[derive(Debug, Clone)]
pub struct HermSqrt {
    pub root: Operator,
    /// Magnitude of the most negative eigenvalue that was clamped (0 if none).
    pub clamped: f64,
    /// Set when an eigenvalue fell below `−PSD_SLACK`.
    pub flagged: bool,
}

impl HermSqrt {
    /// Trace of the root, i.e. the sum of square roots of the clamped eigenvalues.
    pub fn trace(&self) -> f64 {
        self.root.trace().re
    }
}

pub fn herm_sqrt(a: &Operator) -> Result<HermSqrt> {
    let eig = eigh(a)?;
    let most_negative = eig.values.iter().copied().fold(0.0f64, f64::min);
    Ok(HermSqrt {
        root: eig.map(|l| l.max(0.0).sqrt()),
        clamped: 0.0 - most_negative,
        flagged: most_negative < -PSD_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::gates;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let s = herm_sqrt(&Operator::identity(8)).unwrap();
        assert!(s.root.max_abs_diff(&Operator::identity(8)) < 1e-14);
        let d = Operator::diagonal(&[c(4.0, 0.0), c(9.0, 0.0)]).unwrap();
        let s = herm_sqrt(&d).unwrap();
        let want = Operator::diagonal(&[c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        assert!(s.root.max_abs_diff(&want) < 1e-14);
        assert!(!s.flagged);
    }

    #[test]
    fn sqrt_of_projector_is_itself() {
        let p = Operator::basis_projector(8, 5).unwrap();
        let s = herm_sqrt(&p).unwrap();
        assert!(s.root.max_abs_diff(&p) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = Operator::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(herm_sqrt(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn flags_significantly_negative_eigenvalues() {
        let z = gates::pauli_z();
        let s = herm_sqrt(&z).unwrap();
        assert!(s.flagged);
        assert!((s.clamped - 1.0).abs() < 1e-14);
        let tiny = Operator::diagonal(&[c(1.0, 0.0), c(-1e-12, 0.0)]).unwrap();
        let s = herm_sqrt(&tiny).unwrap();
        assert!(!s.flagged);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        // σ_y has eigenvalues ±1 with complex eigenvectors.
        let a = gates::pauli_y()
            .add(&Operator::identity(2).scale(c(2.0, 0.0)))
            .unwrap();
        let e = eigh(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] - 3.0).abs() < 1e-14);
        assert!(e.map(|l| l).max_abs_diff(&a) < 1e-14);
        assert!(e.vectors.is_unitary(1e-13));
    }
}
