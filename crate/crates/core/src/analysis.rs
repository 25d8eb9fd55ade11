//! Strategy classes, Nash-equilibrium payoffs under corruption, the critical
//! corruption level and parameter sweeps.
//!
//! Closed forms for the reference protocol (`γ = π/2`):
//!
//! - quantum equilibrium (one player each of I, H, X): `⟨$⟩ = (−4nx + 2n + p)/3`
//! - classical equilibrium (all X): `⟨$⟩ = q(1 − x)`
//! - crossing: `x_c = (2n + p − 3q)/(4n − 3q)`
//!
//! Each closed form is cross-checked against the simulator in the tests and
//! in [`sweep`] output.
//!
//! A note on `x_c` for `(p, q, n) = (1, 2, 9)`: the crossing evaluates to
//! `13/30 ≈ 0.4333`. The value 0.428 is sometimes quoted for this table; it
//! does not match the closed form, and this crate reports 13/30.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{payoff, play, EntanglerParams, PayoffTable, Strategy, StrategyProfile};
use crate::noise::{corrupted_input, CorruptionModel};

/// Absolute tolerance separating a strict dominance from a tie.
pub const DOMINANCE_TOL: f64 = 1e-12;

/// Tolerance used when matching simulated class payoffs against the reference values.
pub const LABEL_MATCH_TOL: f64 = 5e-3;

/// Default number of grid points in a sweep.
pub const DEFAULT_GRID: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ClassLabel {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    X,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 10] = [
        ClassLabel::I,
        ClassLabel::II,
        ClassLabel::III,
        ClassLabel::IV,
        ClassLabel::V,
        ClassLabel::VI,
        ClassLabel::VII,
        ClassLabel::VIII,
        ClassLabel::IX,
        ClassLabel::X,
    ];

    pub fn roman(&self) -> &'static str {
        match self {
            ClassLabel::I => "I",
            ClassLabel::II => "II",
            ClassLabel::III => "III",
            ClassLabel::IV => "IV",
            ClassLabel::V => "V",
            ClassLabel::VI => "VI",
            ClassLabel::VII => "VII",
            ClassLabel::VIII => "VIII",
            ClassLabel::IX => "IX",
            ClassLabel::X => "X",
        }
    }

    /// Reference mean payoff at `x = 0` for `(p, q, n) = (1, 2, 9)`, as tabulated
    /// (two to four significant figures), and the class size.
    pub fn reference(&self) -> (f64, usize) {
        match self {
            ClassLabel::I => (-3.75, 1),
            ClassLabel::II => (-3.75, 3),
            ClassLabel::III => (-1.833, 3),
            ClassLabel::IV => (2.0, 1),
            ClassLabel::V => (0.0, 1),
            ClassLabel::VI => (-5.67, 3),
            ClassLabel::VII => (6.33, 3),
            ClassLabel::VIII => (6.33, 6),
            ClassLabel::IX => (4.75, 3),
            ClassLabel::X => (-1.833, 3),
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

/// Unordered bag of three strategies from {I, H, X}, stored as counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset {
    identity: u8,
    hadamard: u8,
    flip: u8,
}

impl Multiset {
    pub fn of(profile: &StrategyProfile) -> Option<Self> {
        let mut m = Multiset {
            identity: 0,
            hadamard: 0,
            flip: 0,
        };
        for s in profile.strategies() {
            match s {
                Strategy::Identity => m.identity += 1,
                Strategy::Hadamard => m.hadamard += 1,
                Strategy::Flip => m.flip += 1,
                Strategy::General { .. } => return None,
            }
        }
        Some(m)
    }

    pub fn counts(&self) -> (u8, u8, u8) {
        (self.identity, self.hadamard, self.flip)
    }

    /// Letters in canonical order I, H, X, e.g. `"IHX"` or `"HXX"`.
    pub fn letters(&self) -> String {
        "I".repeat(self.identity as usize)
            + &"H".repeat(self.hadamard as usize)
            + &"X".repeat(self.flip as usize)
    }

    /// Number of distinct orderings.
    pub fn orderings(&self) -> usize {
        let fact = |k: u8| (1..=k as usize).product::<usize>();
        6 / (fact(self.identity) * fact(self.hadamard) * fact(self.flip))
    }

    /// First ordering in I < H < X lexicographic order.
    pub fn canonical_profile(&self) -> StrategyProfile {
        self.letters().parse().expect("three valid letters")
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.letters())
    }
}

impl Serialize for Multiset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.letters())
    }
}

/// All orderings of one multiset.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileGroup {
    pub multiset: Multiset,
    pub configurations: Vec<StrategyProfile>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyClass {
    pub label: ClassLabel,
    pub multiset: Multiset,
    pub configurations: Vec<StrategyProfile>,
}

impl StrategyClass {
    pub fn size(&self) -> usize {
        self.configurations.len()
    }
}

/// Groups the 27 profiles over {I, H, X} by multiset (10 groups).
pub fn enumerate_multisets() -> Vec<ProfileGroup> {
    let mut groups: BTreeMap<Multiset, Vec<StrategyProfile>> = BTreeMap::new();
    for a in Strategy::DISCRETE {
        for b in Strategy::DISCRETE {
            for c in Strategy::DISCRETE {
                let profile = StrategyProfile::new(a, b, c);
                let m = Multiset::of(&profile).expect("discrete strategies");
                groups.entry(m).or_default().push(profile);
            }
        }
    }
    groups
        .into_iter()
        .map(|(multiset, configurations)| ProfileGroup {
            multiset,
            configurations,
        })
        .collect()
}

/// The ten labelled classes, ordered by label.
pub fn enumerate_classes() -> Vec<StrategyClass> {
    let labels = label_classes(&PayoffTable::reference())
        .expect("simulation reproduces the reference payoffs");
    let mut classes: Vec<StrategyClass> = enumerate_multisets()
        .into_iter()
        .map(|g| StrategyClass {
            label: labels[&g.multiset],
            multiset: g.multiset,
            configurations: g.configurations,
        })
        .collect();
    classes.sort_by_key(|c| c.label);
    classes
}

/// Mean payoff of one profile at corruption `x` with the maximal entangler.
pub fn simulated_mean(
    profile: &StrategyProfile,
    table: &PayoffTable,
    x: f64,
    params: EntanglerParams,
) -> Result<f64> {
    let input = corrupted_input(CorruptionModel::new(x)?);
    Ok(payoff(&play(profile, &input, params)?, table).mean)
}

fn ms(letters: &str) -> Multiset {
    Multiset::of(&letters.parse().expect("valid letters")).expect("discrete")
}

/// Assigns class labels to multisets.
///
/// Four labels are anchored structurally: IV = XXX, V = III, VII = two flips and
/// an identity, VIII = one of each. Every other multiset is matched by class size
/// and simulated `x = 0` payoff against the reference values. Classes III and X
/// share a payoff; the multiset with two flips (`HXX`) is labelled III and the one
/// with two identities (`IIH`) is labelled X.
pub fn label_classes(table: &PayoffTable) -> Result<BTreeMap<Multiset, ClassLabel>> {
    if *table != PayoffTable::reference() {
        return Err(Error::NonReferenceTable);
    }
    let params = EntanglerParams::maximal();
    let mut payoffs = BTreeMap::new();
    for g in enumerate_multisets() {
        let means = g
            .configurations
            .iter()
            .map(|p| simulated_mean(p, table, 0.0, params))
            .collect::<Result<Vec<f64>>>()?;
        let first = means[0];
        if means.iter().any(|m| (m - first).abs() > 1e-10) {
            return Err(Error::InconsistentLabels(format!(
                "orderings of {} disagree on the mean payoff",
                g.multiset
            )));
        }
        payoffs.insert(g.multiset, (first, g.configurations.len()));
    }

    let matches = |label: ClassLabel, m: &Multiset| {
        let (want, size) = label.reference();
        let (got, got_size) = payoffs[m];
        size == got_size && (got - want).abs() <= LABEL_MATCH_TOL
    };

    let mut assigned: BTreeMap<Multiset, ClassLabel> = BTreeMap::new();
    let anchors = [
        (ClassLabel::IV, ms("XXX")),
        (ClassLabel::V, ms("III")),
        (ClassLabel::VII, ms("IXX")),
        (ClassLabel::VIII, ms("IHX")),
    ];
    for (label, m) in anchors {
        if !matches(label, &m) {
            return Err(Error::InconsistentLabels(format!(
                "anchor {m} does not reproduce class {label} (simulated {:.4})",
                payoffs[&m].0
            )));
        }
        assigned.insert(m, label);
    }

    for &m in payoffs.keys() {
        if assigned.contains_key(&m) {
            continue;
        }
        let taken: Vec<ClassLabel> = assigned.values().copied().collect();
        let candidates: Vec<ClassLabel> = ClassLabel::ALL
            .into_iter()
            .filter(|l| !taken.contains(l) && matches(*l, &m))
            .collect();
        let label = match candidates.as_slice() {
            [only] => *only,
            [ClassLabel::III, ClassLabel::X] => {
                if m.counts().2 == 2 {
                    ClassLabel::III
                } else {
                    ClassLabel::X
                }
            }
            other => {
                return Err(Error::InconsistentLabels(format!(
                    "multiset {m} (payoff {:.4}) matches {other:?}",
                    payoffs[&m].0
                )))
            }
        };
        assigned.insert(m, label);
    }

    let mut used: Vec<ClassLabel> = assigned.values().copied().collect();
    used.sort();
    used.dedup();
    if used.len() != ClassLabel::ALL.len() {
        return Err(Error::InconsistentLabels(format!(
            "labels not bijective: {assigned:?}"
        )));
    }
    Ok(assigned)
}

/// Mean payoff at the quantum Nash equilibrium, `(−4nx + 2n + p)/3`.
pub fn quantum_ne_payoff(table: &PayoffTable, x: f64) -> f64 {
    (-4.0 * table.n() * x + 2.0 * table.n() + table.p()) / 3.0
}

/// Mean payoff at the classical Nash equilibrium (all X), `q(1 − x)`.
pub fn classical_ne_payoff(table: &PayoffTable, x: f64) -> f64 {
    table.q() * (1.0 - x)
}

/// Where the two equilibrium payoff lines cross.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CriticalCorruption {
    /// Quantum play is ahead for `x < value`.
    Crossing { value: f64 },
    /// `2n + p ≤ 3q`: the quantum equilibrium is never ahead.
    NoAdvantage { numerator: f64 },
}

impl CriticalCorruption {
    pub fn value(&self) -> Option<f64> {
        match *self {
            CriticalCorruption::Crossing { value } => Some(value),
            CriticalCorruption::NoAdvantage { .. } => None,
        }
    }
}

/// `x_c = (2n + p − 3q)/(4n − 3q)`.
pub fn critical_corruption(table: &PayoffTable) -> CriticalCorruption {
    let (p, q, n) = (table.p(), table.q(), table.n());
    let numerator = 2.0 * n + p - 3.0 * q;
    if numerator <= 0.0 {
        return CriticalCorruption::NoAdvantage { numerator };
    }
    CriticalCorruption::Crossing {
        value: numerator / (4.0 * n - 3.0 * q),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dominance {
    Quantum,
    Classical,
    Tie,
}

impl fmt::Display for Dominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dominance::Quantum => "quantum",
            Dominance::Classical => "classical",
            Dominance::Tie => "tie",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumReport {
    pub x: f64,
    pub quantum_ne_mean: f64,
    pub classical_ne_mean: f64,
    pub dominant: Dominance,
}

/// Compares the two equilibria at corruption `x`.
pub fn dominance(table: &PayoffTable, x: f64) -> Result<EquilibriumReport> {
    let x = CorruptionModel::new(x)?.x();
    let quantum = quantum_ne_payoff(table, x);
    let classical = classical_ne_payoff(table, x);
    let dominant = if quantum > classical + DOMINANCE_TOL {
        Dominance::Quantum
    } else if classical > quantum + DOMINANCE_TOL {
        Dominance::Classical
    } else {
        Dominance::Tie
    };
    Ok(EquilibriumReport {
        x,
        quantum_ne_mean: quantum,
        classical_ne_mean: classical,
        dominant,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweptParameter {
    X,
    N,
    Q,
}

impl SweptParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweptParameter::X => "x",
            SweptParameter::N => "n",
            SweptParameter::Q => "q",
        }
    }
}

impl FromStr for SweptParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(SweptParameter::X),
            "n" => Ok(SweptParameter::N),
            "q" => Ok(SweptParameter::Q),
            other => Err(Error::Parse(format!(
                "unknown sweep parameter '{other}' (expected x, n or q)"
            ))),
        }
    }
}

/// Fixed parameters of a sweep. The swept one is overridden per grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepTemplate {
    pub p: f64,
    pub q: f64,
    pub n: f64,
    pub x: f64,
    pub params: EntanglerParams,
}

impl Default for SweepTemplate {
    fn default() -> Self {
        Self {
            p: 1.0,
            q: 2.0,
            n: 9.0,
            x: 0.0,
            params: EntanglerParams::maximal(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub parameter: SweptParameter,
    pub value: f64,
    pub p: f64,
    pub q: f64,
    pub n: f64,
    pub x: f64,
    pub gamma: f64,
    pub valid: bool,
    pub error: Option<String>,
    pub quantum_ne_mean: Option<f64>,
    pub classical_ne_mean: Option<f64>,
    pub x_c: Option<f64>,
    pub dominant: Option<Dominance>,
    /// Simulated mean of the quantum equilibrium profile (x sweeps only).
    pub simulated_quantum_mean: Option<f64>,
    /// Simulated mean of the all-X profile (x sweeps only).
    pub simulated_classical_mean: Option<f64>,
}

fn sweep_point(template: &SweepTemplate, swept: SweptParameter, value: f64) -> SweepRecord {
    let SweepTemplate { p, q, n, x, .. } = *template;
    let (q, n, x) = match swept {
        SweptParameter::X => (q, n, value),
        SweptParameter::N => (q, value, x),
        SweptParameter::Q => (value, n, x),
    };
    let mut record = SweepRecord {
        parameter: swept,
        value,
        p,
        q,
        n,
        x,
        gamma: template.params.gamma(),
        valid: false,
        error: None,
        quantum_ne_mean: None,
        classical_ne_mean: None,
        x_c: None,
        dominant: None,
        simulated_quantum_mean: None,
        simulated_classical_mean: None,
    };
    let evaluated = (|| -> Result<()> {
        let table = PayoffTable::new(p, q, n)?;
        let report = dominance(&table, x)?;
        record.quantum_ne_mean = Some(report.quantum_ne_mean);
        record.classical_ne_mean = Some(report.classical_ne_mean);
        record.dominant = Some(report.dominant);
        record.x_c = critical_corruption(&table).value();
        if swept == SweptParameter::X {
            let quantum: StrategyProfile = "IHX".parse()?;
            let classical: StrategyProfile = "XXX".parse()?;
            record.simulated_quantum_mean =
                Some(simulated_mean(&quantum, &table, x, template.params)?);
            record.simulated_classical_mean =
                Some(simulated_mean(&classical, &table, x, template.params)?);
        }
        Ok(())
    })();
    match evaluated {
        Ok(()) => record.valid = true,
        Err(e) => {
            record.error = Some(e.to_string());
            record.quantum_ne_mean = None;
            record.classical_ne_mean = None;
            record.dominant = None;
            record.x_c = None;
        }
    }
    record
}

/// Evaluates every grid point in parallel; records keep grid order. Points
/// that violate `0 < p < q < n` or `x ∈ [0, 1]` come back marked invalid.
pub fn sweep(template: &SweepTemplate, swept: SweptParameter, grid: &[f64]) -> Vec<SweepRecord> {
    grid.par_iter()
        .map(|&v| sweep_point(template, swept, v))
        .collect()
}

/// `points` evenly spaced values covering `[from, to]` inclusive.
pub fn linspace(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    if !from.is_finite() || !to.is_finite() {
        return Err(Error::InvalidRange("bounds must be finite".into()));
    }
    if from >= to {
        return Err(Error::InvalidRange(format!(
            "empty or inverted range [{from}, {to}]"
        )));
    }
    if points < 2 {
        return Err(Error::InvalidRange(format!(
            "grid needs at least 2 points, got {points}"
        )));
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                to
            } else {
                from + step * i as f64
            }
        })
        .collect())
}
