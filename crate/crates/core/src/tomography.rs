//! Three-qubit Pauli tomography.
//!
//! A state is described by the 64 expectation values
//! `T[i₁,i₂,i₃] = Tr(ρ · σ_{i₁}⊗σ_{i₂}⊗σ_{i₃})` and recovered by linear inversion,
//! `ρ = 2⁻³ Σ T[i₁,i₂,i₃] σ_{i₁}⊗σ_{i₂}⊗σ_{i₃}`. Linear inversion of noisy data
//! need not be positive, so reconstructed states are *raw*.
//!
//! The bundled `class7_appendix` fixture is an experimentally reconstructed
//! output state of the profile `XIX`. It is kept verbatim. Its
//! imaginary block contains the entries ±1.108 and ±1.103, which make the matrix
//! Hermitian with unit trace but strongly non-positive (smallest eigenvalue about
//! −1.08). The values look like transcription errors for ±0.108/±0.103; they are
//! not corrected here. Fidelity against the pure target `|101⟩` only reads the
//! diagonal entry 0.711, so it still yields `√0.711 ≈ 0.843`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qlinalg::{eigh, gates, herm_sqrt, kron, DensityMatrix, Operator, PSD_SLACK};

const PAULI_LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];
const IMAG_RESIDUE_TOL: f64 = 1e-12;

/// Pauli expectation values of a three-qubit state, indexed `[i₁][i₂][i₃]`
/// over `{I, σx, σy, σz}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyTensor {
    values: [f64; 64],
}

fn flat(i1: usize, i2: usize, i3: usize) -> usize {
    assert!(i1 < 4 && i2 < 4 && i3 < 4, "pauli index out of range");
    i1 * 16 + i2 * 4 + i3
}

impl TomographyTensor {
    pub fn from_values(values: [f64; 64]) -> Self {
        Self { values }
    }

    pub fn get(&self, i1: usize, i2: usize, i3: usize) -> f64 {
        self.values[flat(i1, i2, i3)]
    }

    pub fn set(&mut self, i1: usize, i2: usize, i3: usize, value: f64) {
        self.values[flat(i1, i2, i3)] = value;
    }

    pub fn values(&self) -> &[f64; 64] {
        &self.values
    }

    /// `(label, value)` pairs in index order, labels like `"XIZ"`.
    pub fn entries(&self) -> impl Iterator<Item = (String, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (pauli_label(k), v))
    }

    /// `max |self − other|` over all entries.
    pub fn max_abs_diff(&self, other: &TomographyTensor) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Label such as `"XIZ"` for a flat index `i₁·16 + i₂·4 + i₃`.
pub fn pauli_label(index: usize) -> String {
    [index / 16, (index / 4) % 4, index % 4]
        .iter()
        .map(|&i| PAULI_LETTERS[i])
        .collect()
}

fn parse_label(label: &str) -> Option<usize> {
    let idx: Vec<usize> = label
        .chars()
        .map(|c| {
            PAULI_LETTERS
                .iter()
                .position(|&p| p == c.to_ascii_uppercase())
        })
        .collect::<Option<_>>()?;
    match idx.as_slice() {
        [a, b, c] => Some(flat(*a, *b, *c)),
        _ => None,
    }
}

/// `σ_{i₁}⊗σ_{i₂}⊗σ_{i₃}`.
pub fn pauli_string(i1: usize, i2: usize, i3: usize) -> Operator {
    let ab = kron(&gates::pauli(i1), &gates::pauli(i2)).expect("4x4");
    kron(&ab, &gates::pauli(i3)).expect("8x8")
}

fn require_three_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.qubits() != 3 {
        return Err(Error::DimensionMismatch(rho.dim(), 8));
    }
    Ok(())
}

/// `Tr(ρ·P)` for a Pauli string `P`, using that every row of `P` has a single non-zero entry.
fn pauli_expectation(rho: &Operator, pauli: &Operator) -> Complex64 {
    let d = rho.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            let p = pauli.get(j, i);
            if p.re != 0.0 || p.im != 0.0 {
                acc += rho.get(i, j) * p;
            }
        }
    }
    acc
}

/// Exact expectation values of all 64 Pauli strings.
pub fn expectations(rho: &DensityMatrix) -> Result<TomographyTensor> {
    require_three_qubits(rho)?;
    let mut values = [0.0; 64];
    for (k, v) in values.iter_mut().enumerate() {
        let z = pauli_expectation(rho.matrix(), &pauli_string(k / 16, (k / 4) % 4, k % 4));
        if z.im.abs() > IMAG_RESIDUE_TOL {
            return Err(Error::ComplexExpectation(z.im));
        }
        *v = z.re;
    }
    Ok(TomographyTensor { values })
}

/// Linear-inversion reconstruction. The result is Hermitian with unit trace but
/// may have negative eigenvalues, so it is returned as a raw state.
pub fn reconstruct(t: &TomographyTensor) -> Result<DensityMatrix> {
    let t000 = t.get(0, 0, 0);
    if (t000 - 1.0).abs() > 1e-12 {
        return Err(Error::TensorTrace(t000));
    }
    let mut acc = Operator::zeros(8);
    for (k, &v) in t.values.iter().enumerate() {
        if v != 0.0 {
            let term = pauli_string(k / 16, (k / 4) % 4, k % 4).scale(Complex64::new(v / 8.0, 0.0));
            acc = acc.add(&term)?;
        }
    }
    DensityMatrix::raw(acc)
}

/// Finite-statistics measurement settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotConfig {
    shots: u64,
    seed: u64,
}

impl ShotConfig {
    pub fn new(shots: u64, seed: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        Ok(Self { shots, seed })
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Emulates measuring each of the 63 non-identity Pauli strings `shots` times.
///
/// Each string has outcome +1 with probability `(1 + ⟨P⟩)/2`; the number of +1
/// outcomes is drawn as a single binomial variate. String `k` uses ChaCha stream
/// `k` under the configured seed, so results do not depend on scheduling.
pub fn estimate_expectations(rho: &DensityMatrix, cfg: ShotConfig) -> Result<TomographyTensor> {
    let exact = expectations(rho)?;
    let shots = cfg.shots;
    let estimates: Vec<f64> = (1..64usize)
        .into_par_iter()
        .map(|k| {
            let p_plus = ((1.0 + exact.values[k]) / 2.0).clamp(0.0, 1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let plus = Binomial::new(shots, p_plus)
                .expect("p in [0, 1]")
                .sample(&mut rng);
            (2.0 * plus as f64 - shots as f64) / shots as f64
        })
        .collect();
    let mut values = [0.0; 64];
    values[0] = 1.0;
    values[1..].copy_from_slice(&estimates);
    Ok(TomographyTensor { values })
}

/// Eigenvalues of `√σ ρ √σ` below this (relative to its largest) are treated as zero.
pub const ROUNDOFF_FLOOR: f64 = 1e-14;

/// Fidelity with the diagnostics of the clamped square root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    pub fidelity: f64,
    /// Magnitude of the most negative eigenvalue of `√σ ρ √σ` clamped to zero.
    pub clamped: f64,
    /// Whether that eigenvalue lay below the PSD slack.
    pub flagged: bool,
}

/// `F(ρ, σ) = Tr √(√σ ρ √σ)`, with negative eigenvalues clamped.
///
/// `ρ` may be raw (only its Hermitian part is used); `σ` must be physical.
pub fn fidelity_report(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<FidelityReport> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    if sigma.is_raw() {
        sigma.clone().validated()?;
    }
    let root_sigma = herm_sqrt(sigma.matrix())?.root;
    let inner = (&(&root_sigma * &rho.matrix().hermitian_part()) * &root_sigma).hermitian_part();
    // Eigenvalues at roundoff level would contribute ~1e-8 each after the square root.
    let eig = eigh(&inner)?;
    let scale = eig.values.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let floor = ROUNDOFF_FLOOR * scale.max(1.0);
    let most_negative = eig.values.iter().copied().fold(0.0f64, f64::min);
    Ok(FidelityReport {
        fidelity: eig
            .values
            .iter()
            .filter(|&&l| l > floor)
            .map(|l| l.sqrt())
            .sum(),
        clamped: 0.0 - most_negative,
        flagged: most_negative < -PSD_SLACK,
    })
}

pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(fidelity_report(rho, sigma)?.fidelity)
}

/// Nearest positive semidefinite matrix in Frobenius norm, renormalized to unit trace.
pub fn project_psd(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let eig = eigh(&rho.matrix().hermitian_part())?;
    let kept: f64 = eig.values.iter().map(|l| l.max(0.0)).sum();
    if kept <= 0.0 {
        return Err(Error::NotPositive(eig.values[eig.values.len() - 1]));
    }
    let projected = eig.map(|l| l.max(0.0) / kept).hermitian_part();
    DensityMatrix::new(projected)
}

/// Names of the bundled reference states.
pub const REFERENCE_STATES: [&str; 1] = ["class7_appendix"];

const CLASS7_APPENDIX: &str = include_str!("../fixtures/class7_appendix.txt");

/// Loads a bundled reference state as a raw density matrix.
pub fn load_reference_state(name: &str) -> Result<DensityMatrix> {
    match name {
        "class7_appendix" => parse_fixture(CLASS7_APPENDIX),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

fn parse_block(lines: &[&str]) -> Result<Vec<Vec<f64>>> {
    lines
        .iter()
        .map(|line| {
            line.split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("not a number: '{tok}'")))
                })
                .collect()
        })
        .collect()
}

/// Parses the fixture format: `d` lines of `d` decimals (real part), a blank
/// line, then `d` lines of `d` decimals (imaginary part).
pub fn parse_fixture(text: &str) -> Result<DensityMatrix> {
    let mut blocks: Vec<Vec<&str>> = vec![Vec::new()];
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if !blocks.last().expect("non-empty").is_empty() {
                blocks.push(Vec::new());
            }
        } else {
            blocks.last_mut().expect("non-empty").push(line);
        }
    }
    if blocks.last().is_some_and(|b| b.is_empty()) {
        blocks.pop();
    }
    if blocks.len() != 2 {
        return Err(Error::Parse(format!(
            "expected a real and an imaginary block, found {} block(s)",
            blocks.len()
        )));
    }
    let re = parse_block(&blocks[0])?;
    let im = parse_block(&blocks[1])?;
    let d = re.len();
    if im.len() != d || re.iter().chain(&im).any(|row| row.len() != d) {
        return Err(Error::Parse(format!("blocks must both be {d}x{d}")));
    }
    let matrix = Operator::from_fn(d, |i, j| Complex64::new(re[i][j], im[i][j]))?;
    DensityMatrix::raw(matrix)
}

/// Writes a matrix in the fixture format.
pub fn format_fixture(matrix: &Operator) -> String {
    let d = matrix.dim();
    let block = |part: &dyn Fn(Complex64) -> f64| {
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| format!("{}", part(matrix.get(i, j))))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    format!("{}\n\n{}\n", block(&|z| z.re), block(&|z| z.im))
}

/// Parses a tensor file: one `LABEL VALUE` pair per line (space or comma
/// separated), e.g. `XIZ 0.25`. `#` starts a comment, a `pauli,value` header is
/// skipped, and missing strings default to 0.
pub fn parse_tensor(text: &str) -> Result<TomographyTensor> {
    let mut values = [0.0f64; 64];
    let mut seen = [false; 64];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        if lineno == 0
            && fields
                .first()
                .is_some_and(|f| f.eq_ignore_ascii_case("pauli"))
        {
            continue;
        }
        let [label, value] = fields.as_slice() else {
            return Err(Error::Parse(format!(
                "line {}: expected 'LABEL VALUE'",
                lineno + 1
            )));
        };
        let k = parse_label(label).ok_or_else(|| {
            Error::Parse(format!("line {}: bad Pauli label '{label}'", lineno + 1))
        })?;
        if seen[k] {
            return Err(Error::Parse(format!(
                "line {}: duplicate entry for {label}",
                lineno + 1
            )));
        }
        seen[k] = true;
        values[k] = value
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: not a number: '{value}'", lineno + 1)))?;
        if !values[k].is_finite() {
            return Err(Error::NonFinite);
        }
    }
    Ok(TomographyTensor { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expectations_of_basis_states() {
        let t = expectations(&DensityMatrix::basis(3, 0).unwrap()).unwrap();
        assert_eq!(t.get(3, 3, 3), 1.0);
        assert_eq!(t.get(0, 0, 0), 1.0);
        assert_eq!(t.get(1, 0, 0), 0.0);
        // |101⟩: Z eigenvalues (−1, +1, −1).
        let t = expectations(&DensityMatrix::basis(3, 5).unwrap()).unwrap();
        assert_eq!(t.get(3, 0, 3), 1.0);
        assert_eq!(t.get(3, 0, 0), -1.0);
        assert_eq!(t.get(0, 3, 0), 1.0);
        assert_eq!(t.get(3, 3, 3), 1.0);
    }

    #[test]
    fn expectation_shortcut_matches_full_trace() {
        let rho = load_reference_state("class7_appendix").unwrap();
        let t = expectations(&rho).unwrap();
        for k in [0, 5, 27, 63] {
            let p = pauli_string(k / 16, (k / 4) % 4, k % 4);
            let full = rho.matrix().matmul(&p).unwrap().trace();
            assert!((full.re - t.values()[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn expectations_reject_wrong_size() {
        assert!(expectations(&DensityMatrix::basis(2, 0).unwrap()).is_err());
    }

    #[test]
    fn reconstruct_identity_tensor_is_maximally_mixed() {
        let mut t = TomographyTensor::from_values([0.0; 64]);
        t.set(0, 0, 0, 1.0);
        let rho = reconstruct(&t).unwrap();
        assert!(rho.is_raw());
        assert!(
            rho.matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(3).unwrap().matrix())
                < 1e-15
        );
        t.set(0, 0, 0, 0.9);
        assert_eq!(reconstruct(&t), Err(Error::TensorTrace(0.9)));
    }

    #[test]
    fn tensor_round_trip() {
        let mut t = TomographyTensor::from_values([0.0; 64]);
        t.set(0, 0, 0, 1.0);
        t.set(1, 2, 3, 0.3);
        t.set(3, 0, 3, -0.7);
        t.set(2, 2, 0, 0.11);
        let back = expectations(&reconstruct(&t).unwrap()).unwrap();
        assert!(back.max_abs_diff(&t) <= 1e-12);
    }

    #[test]
    fn estimator_is_deterministic_and_keeps_identity() {
        let rho = DensityMatrix::basis(3, 5).unwrap();
        let cfg = ShotConfig::new(1000, 42).unwrap();
        let a = estimate_expectations(&rho, cfg).unwrap();
        let b = estimate_expectations(&rho, cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(0, 0, 0), 1.0);
        // ±1 expectations are deterministic even with few shots.
        assert_eq!(a.get(3, 0, 3), 1.0);
        let c = estimate_expectations(&rho, ShotConfig::new(1000, 43).unwrap()).unwrap();
        assert_ne!(a, c);
        assert_eq!(ShotConfig::new(0, 1), Err(Error::ZeroShots));
    }

    #[test]
    fn fidelity_basics() {
        let s = DensityMatrix::basis(3, 5).unwrap();
        assert!((fidelity(&s, &s).unwrap() - 1.0).abs() < 1e-12);
        let a = DensityMatrix::basis(3, 0).unwrap();
        let b = DensityMatrix::basis(3, 7).unwrap();
        assert!(fidelity(&a, &b).unwrap().abs() < 1e-12);
        assert!(fidelity(&a, &DensityMatrix::basis(2, 0).unwrap()).is_err());
    }

    #[test]
    fn appendix_fixture_transcription() {
        let rho = load_reference_state("class7_appendix").unwrap();
        assert!(rho.is_raw());
        assert_eq!(rho.get(5, 5).re, 0.711);
        assert_eq!(rho.get(0, 1).re, -0.188);
        assert_eq!(rho.get(1, 0).re, -0.188);
        assert_eq!(rho.get(0, 1).im, 0.229);
        assert_eq!(rho.get(1, 0).im, -0.229);
        assert_eq!(rho.get(4, 7).im, -1.108);
        assert_eq!(rho.hermiticity_deviation(), 0.0);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(rho.min_eigenvalue().unwrap() < -1.0);
        assert!(rho.clone().validated().is_err());
        assert!(matches!(
            load_reference_state("nope"),
            Err(Error::UnknownFixture(_))
        ));
    }

    #[test]
    fn appendix_fidelity_against_target() {
        let rho = load_reference_state("class7_appendix").unwrap();
        let target = DensityMatrix::basis(3, 5).unwrap();
        let f = fidelity(&rho, &target).unwrap();
        assert!((f - 0.711f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn psd_projection_of_appendix() {
        let rho = load_reference_state("class7_appendix").unwrap();
        let proj = project_psd(&rho).unwrap();
        assert!(!proj.is_raw());
        assert!(proj.min_eigenvalue().unwrap() >= -1e-10);
        assert!((proj.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fixture_format_round_trip_and_errors() {
        let rho = load_reference_state("class7_appendix").unwrap();
        let again = parse_fixture(&format_fixture(rho.matrix())).unwrap();
        assert_eq!(again, rho);
        assert!(parse_fixture("1 0\n0 0\n").is_err());
        assert!(parse_fixture("1 0\n0 0\n\n0 0\n0\n").is_err());
        assert!(parse_fixture("1 a\n0 0\n\n0 0\n0 0\n").is_err());
        assert!(parse_fixture("1 0\n0 0\n\n0 0\n0 0\n").is_ok());
    }

    #[test]
    fn tensor_file_parsing() {
        let t = parse_tensor("pauli,value\nIII,1\nXIZ,0.25\n# comment\nzzz -0.5\n").unwrap();
        assert_eq!(t.get(0, 0, 0), 1.0);
        assert_eq!(t.get(1, 0, 3), 0.25);
        assert_eq!(t.get(3, 3, 3), -0.5);
        assert_eq!(t.get(2, 2, 2), 0.0);
        assert!(parse_tensor("III 1\nIII 1\n").is_err());
        assert!(parse_tensor("IIA 1\n").is_err());
        assert!(parse_tensor("III\n").is_err());
        assert_eq!(pauli_label(0), "III");
        assert_eq!(pauli_label(63), "ZZZ");
        assert_eq!(pauli_label(19), "XIZ");
    }
}
