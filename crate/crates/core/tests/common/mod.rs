//! Test-only oracles. These reimplement the physics with plain arrays and
//! index arithmetic, independent of the library's `Operator` machinery.
#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type State = [Complex64; 8];

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn basis(k: usize) -> State {
    let mut s = [c(0.0, 0.0); 8];
    s[k] = c(1.0, 0.0);
    s
}

/// Applies a 2×2 matrix `[[a, b], [c, d]]` to `qubit` (0 = most significant bit).
pub fn apply_1q(state: &State, qubit: usize, m: [[Complex64; 2]; 2]) -> State {
    let bit = 4 >> qubit;
    let mut out = [c(0.0, 0.0); 8];
    for k in 0..8 {
        let b = usize::from(k & bit != 0);
        let k0 = k & !bit;
        let k1 = k | bit;
        out[k] = m[b][0] * state[k0] + m[b][1] * state[k1];
    }
    out
}

pub fn apply_cnot(state: &State, control: usize, target: usize) -> State {
    let (cb, tb) = (4 >> control, 4 >> target);
    let mut out = [c(0.0, 0.0); 8];
    for k in 0..8 {
        let image = if k & cb != 0 { k ^ tb } else { k };
        out[image] = state[k];
    }
    out
}

/// `J(π/2) = (I + i·XXX)/√2`: XXX maps index k to 7 − k.
pub fn apply_j(state: &State, dagger: bool) -> State {
    let sign = if dagger { -1.0 } else { 1.0 };
    let mut out = [c(0.0, 0.0); 8];
    for k in 0..8 {
        out[k] = (state[k] + c(0.0, sign) * state[7 - k]) * FRAC_1_SQRT_2;
    }
    out
}

pub fn letter_matrix(letter: char) -> [[Complex64; 2]; 2] {
    let h = FRAC_1_SQRT_2;
    match letter {
        'I' => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        'X' => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        'H' => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
        _ => panic!("unknown letter {letter}"),
    }
}

/// Outcome probabilities of `J† S J |k⟩` for a pure basis input.
pub fn oracle_probs_from_basis(profile: &str, k: usize) -> [f64; 8] {
    let mut s = apply_j(&basis(k), false);
    for (q, letter) in profile.chars().enumerate() {
        s = apply_1q(&s, q, letter_matrix(letter));
    }
    s = apply_j(&s, true);
    s.map(|z| z.norm_sqr())
}

/// Outcome probabilities on `(1−x)|000⟩⟨000| + x|111⟩⟨111|` by mixing two pure runs.
pub fn oracle_probs(profile: &str, x: f64) -> [f64; 8] {
    let a = oracle_probs_from_basis(profile, 0);
    let b = oracle_probs_from_basis(profile, 7);
    std::array::from_fn(|k| (1.0 - x) * a[k] + x * b[k])
}

/// Payoff table rows written out longhand.
pub fn oracle_mean(probs: &[f64; 8], p: f64, q: f64, n: f64) -> f64 {
    let rows = [
        [0.0, 0.0, 0.0],
        [-n, -n, p],
        [-n, p, -n],
        [p, n, n],
        [p, -n, -n],
        [n, p, n],
        [n, n, p],
        [q, q, q],
    ];
    let mut total = 0.0;
    for k in 0..8 {
        total += probs[k] * (rows[k][0] + rows[k][1] + rows[k][2]);
    }
    total / 3.0
}

/// Haar-like random normalized vector from complex Gaussians.
pub fn random_state<R: Rng>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}
