//! The three-player game: `J† (S₁⊗S₂⊗S₃) J` acting on a (possibly mixed) source,
//! measured in the computational basis and scored with a payoff table.

use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qlinalg::{conjugate_by, gates, kron, DensityMatrix, Operator};

/// Negative probabilities above this are rounding noise and are clamped to 0.
pub const PROBABILITY_SLACK: f64 = 1e-12;

/// Entangling strength `γ ∈ [0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglerParams {
    gamma: f64,
}

impl EntanglerParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&gamma) {
            return Err(Error::InvalidGamma(gamma));
        }
        Ok(Self { gamma })
    }

    /// Maximal correlation, `γ = π/2`.
    pub fn maximal() -> Self {
        Self { gamma: FRAC_PI_2 }
    }

    /// No entanglement, `γ = 0`; the game is then classical.
    pub fn classical() -> Self {
        Self { gamma: 0.0 }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl Default for EntanglerParams {
    fn default() -> Self {
        Self::maximal()
    }
}

/// A player's local operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    /// Stay home.
    Identity,
    /// Go with probability one half.
    Hadamard,
    /// Go to the party.
    Flip,
    /// Arbitrary single-qubit unitary `U(θ, φ, λ)`.
    General { theta: f64, phi: f64, lambda: f64 },
}

impl Strategy {
    /// The three strategies of the restricted game, in canonical order.
    pub const DISCRETE: [Strategy; 3] = [Strategy::Identity, Strategy::Hadamard, Strategy::Flip];

    pub fn general(theta: f64, phi: f64, lambda: f64) -> Result<Self> {
        if [theta, phi, lambda].iter().all(|a| a.is_finite()) {
            Ok(Strategy::General { theta, phi, lambda })
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Strategy::Identity),
            'H' => Some(Strategy::Hadamard),
            'X' => Some(Strategy::Flip),
            _ => None,
        }
    }

    pub fn letter(&self) -> Option<char> {
        match self {
            Strategy::Identity => Some('I'),
            Strategy::Hadamard => Some('H'),
            Strategy::Flip => Some('X'),
            Strategy::General { .. } => None,
        }
    }

    pub fn unitary(&self) -> Operator {
        strategy_unitary(self)
    }
}

pub fn strategy_unitary(s: &Strategy) -> Operator {
    match *s {
        Strategy::Identity => gates::identity(),
        Strategy::Hadamard => gates::hadamard(),
        Strategy::Flip => gates::pauli_x(),
        Strategy::General { theta, phi, lambda } => gates::u3(theta, phi, lambda),
    }
}

/// One strategy per player; player `k` acts on qubit `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyProfile(pub [Strategy; 3]);

impl StrategyProfile {
    pub fn new(s1: Strategy, s2: Strategy, s3: Strategy) -> Self {
        Self([s1, s2, s3])
    }

    pub fn strategies(&self) -> &[Strategy; 3] {
        &self.0
    }

    /// `S₁ ⊗ S₂ ⊗ S₃`.
    pub fn unitary(&self) -> Operator {
        let [a, b, c] = self.0.map(|s| s.unitary());
        kron(&kron(&a, &b).expect("4x4"), &c).expect("8x8")
    }
}

impl FromStr for StrategyProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters: Vec<Strategy> = s
            .chars()
            .map(Strategy::from_letter)
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidProfile(s.to_string()))?;
        let players: [Strategy; 3] = letters
            .try_into()
            .map_err(|_| Error::InvalidProfile(s.to_string()))?;
        Ok(Self(players))
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            match s.letter() {
                Some(c) => write!(f, "{c}")?,
                None => write!(f, "U")?,
            }
        }
        Ok(())
    }
}

/// Payoff parameters with `0 < p < q < n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PayoffTable {
    p: f64,
    q: f64,
    n: f64,
}

impl PayoffTable {
    pub fn new(p: f64, q: f64, n: f64) -> Result<Self> {
        // Written so that NaN fails every comparison.
        if 0.0 < p && p < q && q < n && n.is_finite() {
            Ok(Self { p, q, n })
        } else {
            Err(Error::InvalidPayoffTable { p, q, n })
        }
    }

    /// `(p, q, n) = (1, 2, 9)`.
    pub fn reference() -> Self {
        Self {
            p: 1.0,
            q: 2.0,
            n: 9.0,
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    /// Per-player payoffs for measurement outcome `b₀b₁b₂` (index `0..8`).
    ///
    /// # Panics
    /// If `outcome >= 8`.
    pub fn row(&self, outcome: usize) -> [f64; 3] {
        let (p, q, n) = (self.p, self.q, self.n);
        match outcome {
            0b000 => [0.0, 0.0, 0.0],
            0b001 => [-n, -n, p],
            0b010 => [-n, p, -n],
            0b011 => [p, n, n],
            0b100 => [p, -n, -n],
            0b101 => [n, p, n],
            0b110 => [n, n, p],
            0b111 => [q, q, q],
            _ => panic!("outcome {outcome} out of range"),
        }
    }
}

impl Default for PayoffTable {
    fn default() -> Self {
        Self::reference()
    }
}

/// Probabilities of the eight measurement outcomes, indexed by `b₀b₁b₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    probs: [f64; 8],
}

impl OutcomeDistribution {
    /// Clamps rounding-level negatives and renormalizes.
    pub fn from_probabilities(raw: [f64; 8]) -> Result<Self> {
        let mut probs = raw;
        for p in &mut probs {
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
            if *p < -PROBABILITY_SLACK {
                return Err(Error::NegativeProbability(*p));
            }
            *p = p.max(0.0);
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(total));
        }
        probs.iter_mut().for_each(|p| *p /= total);
        Ok(Self { probs })
    }

    /// Point mass on one outcome.
    pub fn delta(outcome: usize) -> Self {
        let mut probs = [0.0; 8];
        probs[outcome] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64; 8] {
        &self.probs
    }

    pub fn prob(&self, outcome: usize) -> f64 {
        self.probs[outcome]
    }

    /// The outcome carrying all the mass, if any does (within `tol`).
    pub fn deterministic_outcome(&self, tol: f64) -> Option<usize> {
        self.probs.iter().position(|&p| (p - 1.0).abs() <= tol)
    }
}

/// Expected payoff of each player and their mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PayoffVector {
    pub player1: f64,
    pub player2: f64,
    pub player3: f64,
    pub mean: f64,
}

impl PayoffVector {
    pub fn new(player1: f64, player2: f64, player3: f64) -> Self {
        Self {
            player1,
            player2,
            player3,
            mean: (player1 + player2 + player3) / 3.0,
        }
    }

    pub fn players(&self) -> [f64; 3] {
        [self.player1, self.player2, self.player3]
    }
}

/// `J(γ) = cos(γ/2)·I⊗I⊗I + i·sin(γ/2)·X⊗X⊗X`.
pub fn entangler(params: EntanglerParams) -> Operator {
    let (s, c) = (params.gamma / 2.0).sin_cos();
    let x = gates::pauli_x();
    let xxx = kron(&kron(&x, &x).expect("4x4"), &x).expect("8x8");
    Operator::identity(8)
        .scale(Complex64::new(c, 0.0))
        .add(&xxx.scale(Complex64::new(0.0, s)))
        .expect("8x8")
}

/// `J(γ)†`.
pub fn disentangler(params: EntanglerParams) -> Operator {
    entangler(params).dagger()
}

/// The full game operator `J† (S₁⊗S₂⊗S₃) J`.
pub fn game_unitary(profile: &StrategyProfile, params: EntanglerParams) -> Operator {
    let j = entangler(params);
    &(&j.dagger() * &profile.unitary()) * &j
}

/// State just before measurement.
pub fn output_state(
    profile: &StrategyProfile,
    input: &DensityMatrix,
    params: EntanglerParams,
) -> Result<DensityMatrix> {
    if input.qubits() != 3 {
        return Err(Error::DimensionMismatch(input.dim(), 8));
    }
    let tr = input.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::NotNormalized(tr.re));
    }
    conjugate_by(&game_unitary(profile, params), input)
}

/// Outcome distribution of one round of the game.
pub fn play(
    profile: &StrategyProfile,
    input: &DensityMatrix,
    params: EntanglerParams,
) -> Result<OutcomeDistribution> {
    let out = output_state(profile, input, params)?;
    let mut probs = [0.0; 8];
    for (k, p) in probs.iter_mut().enumerate() {
        *p = out.get(k, k).re;
    }
    OutcomeDistribution::from_probabilities(probs)
}

/// Expected payoffs under `dist`.
pub fn payoff(dist: &OutcomeDistribution, table: &PayoffTable) -> PayoffVector {
    let mut acc = [0.0; 3];
    for (k, &prob) in dist.probs().iter().enumerate() {
        for (a, r) in acc.iter_mut().zip(table.row(k)) {
            *a += prob * r;
        }
    }
    PayoffVector::new(acc[0], acc[1], acc[2])
}

/// One elementary gate of a three-qubit circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum GateDescriptor {
    Cnot { control: usize, target: usize },
    Rx { qubit: usize, angle: f64 },
}

impl GateDescriptor {
    /// 8×8 matrix of the gate on the three-qubit register.
    pub fn operator(&self) -> Operator {
        match *self {
            GateDescriptor::Cnot { control, target } => {
                gates::cnot(3, control, target).expect("valid qubits")
            }
            GateDescriptor::Rx { qubit, angle } => {
                gates::on_qubit(3, qubit, &gates::rx(angle)).expect("valid qubit")
            }
        }
    }
}

impl fmt::Display for GateDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateDescriptor::Cnot { control, target } => write!(f, "CNOT {control}->{target}"),
            GateDescriptor::Rx { qubit, angle } => write!(f, "Rx({angle}) on {qubit}"),
        }
    }
}

/// `J(π/2)` as one `R_x(−π/2)` and four CNOTs, listed in application order.
pub fn decompose_entangler() -> Vec<GateDescriptor> {
    use GateDescriptor::*;
    vec![
        Cnot {
            control: 1,
            target: 0,
        },
        Cnot {
            control: 1,
            target: 2,
        },
        Rx {
            qubit: 1,
            angle: -FRAC_PI_2,
        },
        Cnot {
            control: 1,
            target: 0,
        },
        Cnot {
            control: 1,
            target: 2,
        },
    ]
}

/// Product of gates given in application order (first gate acts first).
pub fn compose(sequence: &[GateDescriptor]) -> Operator {
    sequence
        .iter()
        .fold(Operator::identity(8), |acc, g| &g.operator() * &acc)
}

/// `(|000⟩ + i|111⟩)/√2`, the maximally entangled starting point of the game.
pub fn entangled_reference_state() -> Vec<Complex64> {
    let mut psi = vec![Complex64::new(0.0, 0.0); 8];
    psi[0] = Complex64::new(1.0 / SQRT_2, 0.0);
    psi[7] = Complex64::new(0.0, 1.0 / SQRT_2);
    psi
}
