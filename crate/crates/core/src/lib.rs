//! Exact simulation and analysis of the noisy three-player quantum dilemma game.
//!
//! Three players share qubits entangled by `J = cos(γ/2)·I⊗I⊗I + i·sin(γ/2)·X⊗X⊗X`,
//! apply one local unitary each, and are disentangled by `J†` before a
//! computational-basis measurement. The outcome is scored with a payoff table
//! parametrized by `0 < p < q < n`. The source may be corrupted, emitting
//! `(1−x)|000⟩⟨000| + x|111⟩⟨111|` instead of `|000⟩`.
//!
//! Modules, bottom up:
//!
//! - [`qlinalg`]: dense complex matrices, density matrices, Hermitian square roots.
//! - [`game`]: entangler, strategies, outcome distributions and payoffs.
//! - [`noise`]: the corrupted source, directly and through an ancilla circuit.
//! - [`analysis`]: strategy classes, Nash-equilibrium payoffs, critical corruption, sweeps.
//! - [`tomography`]: Pauli-basis reconstruction, shot estimation, fidelity.
//! - [`cli`]: the `qdilemma` command-line front end.
//!
//! Basis indices follow the bit string `b₀b₁b₂` with player 1 (qubit 0) as the
//! most significant bit, so `|101⟩` is index 5.

#![forbid(unsafe_code)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod game;
pub mod noise;
pub mod qlinalg;
pub mod tomography;

pub use error::{Error, Result};
