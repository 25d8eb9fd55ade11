//! Acceptance suite. Prints one PASS/FAIL line per criterion, then asserts all pass.
//!
//! Run with `cargo test -p qdilemma --test acceptance -- --nocapture`.

mod common;

use num_complex::Complex64;
use qdilemma::analysis::{
    classical_ne_payoff, critical_corruption, dominance, enumerate_classes, linspace,
    quantum_ne_payoff, simulated_mean, ClassLabel, CriticalCorruption, Dominance,
};
use qdilemma::game::{
    compose, decompose_entangler, entangler, play, EntanglerParams, PayoffTable, Strategy,
    StrategyProfile,
};
use qdilemma::noise::{ancilla_prepare, corrupted_input, CorruptionModel};
use qdilemma::qlinalg::{global_phase_distance, DensityMatrix};
use qdilemma::tomography::{
    estimate_expectations, expectations, fidelity, load_reference_state, reconstruct, ShotConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

type Check = fn() -> Outcome;

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn class_payoffs() -> Outcome {
    let table = PayoffTable::reference();
    let params = EntanglerParams::maximal();
    let mut expected = vec![
        -3.75, -3.75, -1.833, 2.0, 0.0, -5.67, 6.33, 6.33, 4.75, -1.833,
    ];
    let mut got = Vec::new();
    let mut worst_anchor: f64 = 0.0;
    for class in enumerate_classes() {
        let mean =
            simulated_mean(&class.multiset.canonical_profile(), &table, 0.0, params).unwrap();
        got.push(mean);
        let anchored = [
            ClassLabel::IV,
            ClassLabel::V,
            ClassLabel::VII,
            ClassLabel::VIII,
        ];
        if anchored.contains(&class.label) {
            worst_anchor = worst_anchor.max((mean - class.label.reference().0).abs());
        }
    }
    expected.sort_by(f64::total_cmp);
    got.sort_by(f64::total_cmp);
    let worst = expected
        .iter()
        .zip(&got)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    outcome(
        got.len() == 10 && worst <= 5e-3 && worst_anchor <= 5e-3,
        format!("multiset err {worst:.2e}, anchored err {worst_anchor:.2e}"),
    )
}

fn critical_value() -> Outcome {
    match critical_corruption(&PayoffTable::reference()) {
        CriticalCorruption::Crossing { value } => {
            let err = (value - 13.0 / 30.0).abs();
            outcome(err <= 1e-12, format!("x_c = {value:.15}, err {err:.2e}"))
        }
        other => outcome(false, format!("{other:?}")),
    }
}

fn ne_formulas() -> Outcome {
    let table = PayoffTable::reference();
    let params = EntanglerParams::maximal();
    let ihx: StrategyProfile = "IHX".parse().unwrap();
    let xxx: StrategyProfile = "XXX".parse().unwrap();
    let (mut wq, mut wc) = (0.0f64, 0.0f64);
    for x in linspace(0.0, 1.0, 101).unwrap() {
        wq = wq.max(
            (simulated_mean(&ihx, &table, x, params).unwrap() - quantum_ne_payoff(&table, x)).abs(),
        );
        wc = wc.max(
            (simulated_mean(&xxx, &table, x, params).unwrap() - classical_ne_payoff(&table, x))
                .abs(),
        );
    }
    outcome(
        wq <= 1e-10 && wc <= 1e-10,
        format!("quantum err {wq:.2e}, classical err {wc:.2e}"),
    )
}

fn appendix_fidelity() -> Outcome {
    let rho = load_reference_state("class7_appendix").unwrap();
    let f = fidelity(&rho, &DensityMatrix::basis(3, 5).unwrap()).unwrap();
    outcome((f - 0.843).abs() <= 1e-3, format!("F = {f:.6}"))
}

fn decomposition() -> Outcome {
    let product = compose(&decompose_entangler());
    let j = entangler(EntanglerParams::maximal());
    let err = global_phase_distance(&product, &j);
    let mut input = vec![Complex64::new(0.0, 0.0); 8];
    input[0] = Complex64::new(1.0, 0.0);
    let out = product.apply(&input).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut want = vec![Complex64::new(0.0, 0.0); 8];
    want[0] = Complex64::new(h, 0.0);
    want[7] = Complex64::new(0.0, h);
    let state_err = out
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    outcome(
        err <= 1e-12 && state_err <= 1e-12,
        format!("operator err {err:.2e}, state err {state_err:.2e}"),
    )
}

fn noise_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    for x in linspace(0.0, 1.0, 101).unwrap() {
        let a = ancilla_prepare(x).unwrap();
        let b = corrupted_input(CorruptionModel::new(x).unwrap());
        worst = worst.max(a.matrix().max_abs_diff(b.matrix()));
    }
    outcome(worst <= 1e-12, format!("max entry err {worst:.2e}"))
}

fn tomography_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let psi = common::random_state(&mut rng, 8);
        let rho = DensityMatrix::pure(&psi).unwrap();
        let back = reconstruct(&expectations(&rho).unwrap()).unwrap();
        worst = worst.max(back.matrix().max_abs_diff(rho.matrix()));
    }
    let target = DensityMatrix::basis(3, 5).unwrap();
    let est = estimate_expectations(&target, ShotConfig::new(1_000_000, 11).unwrap()).unwrap();
    let shot_err = est.max_abs_diff(&expectations(&target).unwrap());
    outcome(
        worst <= 1e-12 && shot_err <= 5e-3,
        format!("round trip err {worst:.2e}, 1e6-shot err {shot_err:.2e}"),
    )
}

fn dominance_boundary() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut failures = 0usize;
    let mut max_xc: f64 = 0.0;
    let mut tables = 0;
    while tables < 1000 {
        let mut v = [
            rng.random_range(0.0..100.0),
            rng.random_range(0.0..100.0),
            rng.random_range(0.0..100.0),
        ];
        v.sort_by(f64::total_cmp);
        let Ok(table) = PayoffTable::new(v[0], v[1], v[2]) else {
            continue;
        };
        tables += 1;
        if let CriticalCorruption::Crossing { value } = critical_corruption(&table) {
            max_xc = max_xc.max(value);
            if value >= 0.5 {
                failures += 1;
            }
        }
        for _ in 0..5 {
            let x = rng.random_range(0.5..=1.0);
            if x > 0.5 && dominance(&table, x).unwrap().dominant == Dominance::Quantum {
                failures += 1;
            }
        }
    }
    let mut prev = f64::NEG_INFINITY;
    let mut monotone = true;
    for n in 3..=100 {
        let v = critical_corruption(&PayoffTable::new(1.0, 2.0, n as f64).unwrap())
            .value()
            .unwrap_or(f64::NAN);
        monotone &= v > prev;
        prev = v;
    }
    outcome(
        failures == 0 && monotone,
        format!("{tables} tables, max x_c {max_xc:.6}, violations {failures}, monotone in n: {monotone}"),
    )
}

fn classical_limit() -> Outcome {
    let input = DensityMatrix::basis(3, 0).unwrap();
    let mut ok = 0;
    let choices = [Strategy::Identity, Strategy::Flip];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let profile = StrategyProfile::new(choices[a], choices[b], choices[c]);
                let dist = play(&profile, &input, EntanglerParams::classical()).unwrap();
                if dist.deterministic_outcome(1e-12) == Some(a * 4 + b * 2 + c) {
                    ok += 1;
                }
            }
        }
    }
    outcome(ok == 8, format!("{ok}/8 profiles deterministic"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check); 9] = [
        ("class payoffs at x=0", class_payoffs),
        ("critical corruption 13/30", critical_value),
        ("NE formulas vs simulation", ne_formulas),
        ("appendix fidelity", appendix_fidelity),
        ("entangler decomposition", decomposition),
        ("ancilla noise circuit", noise_equivalence),
        ("tomography round trip", tomography_round_trip),
        ("dominance boundary", dominance_boundary),
        ("classical limit", classical_limit),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {}. {name}: {}", i + 1, result.detail);
        if !result.pass {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
