use std::fmt;
use std::ops::{Index, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest operator dimension handled (four qubits).
pub const MAX_DIM: usize = 16;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix with a power-of-two dimension in `2..=16`.
#[derive(Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Vec<Complex64>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim.is_power_of_two() && (2..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::InvalidDimension(dim))
    }
}

impl Operator {
    /// Builds an operator from row-major entries.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::ShapeMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        check_dim(dim)?;
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self::new(dim, data)
    }

    /// Builds an operator from real row-major entries.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::new(dim, data.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    /// # Panics
    /// If `dim` is not a supported dimension.
    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO }).expect("supported dimension")
    }

    /// # Panics
    /// If `dim` is not a supported dimension.
    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| ZERO).expect("supported dimension")
    }

    pub fn diagonal(values: &[Complex64]) -> Result<Self> {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { ZERO })
    }

    /// Projector `|k⟩⟨k|` onto a computational basis state.
    pub fn basis_projector(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::DimensionMismatch(k, dim));
        }
        Self::from_fn(dim, |i, j| if i == k && j == k { ONE } else { ZERO })
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &[Complex64], b: &[Complex64]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch(a.len(), b.len()));
        }
        Self::from_fn(a.len(), |i, j| a[i] * b[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits the operator acts on.
    pub fn qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diagonal_entries(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn matmul(&self, rhs: &Operator) -> Result<Operator> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(self.dim, rhs.dim));
        }
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        Ok(Operator { dim: d, data: out })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, v.len()));
        }
        Ok((0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Operator {
        let d = self.dim;
        let data = (0..d * d)
            .map(|k| self.data[(k % d) * d + k / d].conj())
            .collect();
        Operator { dim: d, data }
    }

    pub fn kron(&self, rhs: &Operator) -> Result<Operator> {
        kron(self, rhs)
    }

    pub fn scale(&self, c: Complex64) -> Operator {
        Operator {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn add(&self, rhs: &Operator) -> Result<Operator> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Operator) -> Result<Operator> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &Operator,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Operator> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(self.dim, rhs.dim));
        }
        Ok(Operator {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self − rhs‖_max`, or infinity if the dimensions differ.
    pub fn max_abs_diff(&self, rhs: &Operator) -> f64 {
        if self.dim != rhs.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖A − A†‖_max`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `‖U·U† − I‖_max ≤ tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.matmul(&self.dagger()).expect("same dimension");
        prod.max_abs_diff(&Operator::identity(self.dim)) <= tol
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Operator {
        let d = self.dim;
        Operator::from_fn(d, |i, j| 0.5 * (self.get(i, j) + self.get(j, i).conj()))
            .expect("same dimension")
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.data[row * self.dim + col]
    }
}

impl Mul for &Operator {
    type Output = Operator;

    /// # Panics
    /// On a dimension mismatch; use [`Operator::matmul`] for a fallible product.
    fn mul(self, rhs: &Operator) -> Operator {
        self.matmul(rhs).expect("operator dimensions must match")
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Tensor product `a ⊗ b`; entry `(i·d_b + k, j·d_b + l) = a[i,j]·b[k,l]`.
pub fn kron(a: &Operator, b: &Operator) -> Result<Operator> {
    let dim = a.dim * b.dim;
    if dim > MAX_DIM {
        return Err(Error::DimensionOverflow(dim));
    }
    let db = b.dim;
    Operator::from_fn(dim, |r, c| a.get(r / db, c / db) * b.get(r % db, c % db))
}

/// `min_c ‖a − c·b‖_max` over the unit-modulus `c` fixed by the largest entry of `b`.
pub fn global_phase_distance(a: &Operator, b: &Operator) -> f64 {
    if a.dim != b.dim {
        return f64::INFINITY;
    }
    let (k, pivot) = b
        .data
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("non-empty");
    if pivot.norm() == 0.0 {
        return a.max_abs();
    }
    let ratio = a.data[k] / pivot;
    let phase = if ratio.norm() == 0.0 {
        ONE
    } else {
        ratio / ratio.norm()
    };
    a.max_abs_diff(&b.scale(phase))
}

/// Whether `a` and `b` agree up to a global phase within `tol` (max norm).
pub fn equal_up_to_global_phase(a: &Operator, b: &Operator, tol: f64) -> bool {
    global_phase_distance(a, b) <= tol
}
