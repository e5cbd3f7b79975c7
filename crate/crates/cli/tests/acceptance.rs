//! Acceptance suite: one test per headline claim, each printing a single
//! pass line. Tolerances are pinned in the assertions; exact claims are
//! checked with integer/rational arithmetic, never with a floating
//! near-zero standing in for zero.

use std::collections::BTreeSet;
use std::process::Command;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wnogo_core::bellmermin::{closed_form_mean, sample_mean, Observable, PreparedDirection};
use wnogo_core::contradiction::{
    counterfactual_completion, exact_probability, forbidden_witnesses, StateFamily, Verdict,
};
use wnogo_core::lhv::{
    enumerate_all, lhv_outcome_probability, pipeline, quantum_weight_accounting,
    rule_forbidden_patterns, rule_single_excitation, survivor_weight,
};
use wnogo_core::preparation::{evolve, evolve_matrix_exponential, tau_pi_half, PreparationConfig};
use wnogo_core::statevector::{
    all_outcomes, exact_zero_test, ghz_state, w_state, Basis, MeasurementSettings, Outcome, Sign,
    SiteResult, Statevector,
};

fn s(text: &str) -> MeasurementSettings {
    MeasurementSettings::parse(text).unwrap()
}

fn o(text: &str) -> Outcome {
    Outcome::parse(text).unwrap()
}

#[test]
fn criterion_01_zero_amplitude_identities() {
    let w3 = w_state(3).unwrap();
    for (settings, outcome) in [(s("XZX"), o("+0-")), (s("XXZ"), o("-+0"))] {
        let verdict = exact_zero_test(3, &settings, &outcome).unwrap();
        assert!(verdict.is_zero && verdict.exact);
        let amp = w3.amplitude(&settings, &outcome).unwrap().norm();
        assert!(amp < 1e-12, "floating magnitude {amp}");
    }
    println!("criterion 01 PASS: <W3|+0-> = <W3|-+0> = 0, exact and floating");
}

#[test]
fn criterion_02_one_twelfth_bookkeeping() {
    let w3 = w_state(3).unwrap();
    let settings = s("ZXX");
    for signs in ["1++", "1+-", "1-+", "1--"] {
        let outcome = o(signs);
        let exact = exact_probability(StateFamily::W, 3, &settings, &outcome).unwrap();
        assert_eq!(exact, Ratio::new(1, 12), "{signs}");
        let float = w3.probability(&settings, &outcome).unwrap();
        assert!((float - 1.0 / 12.0).abs() < 1e-12, "{signs}: {float}");
    }
    println!("criterion 02 PASS: P(W3; Z,X,X -> 1,±,±) = 1/12 for all four sign pairs");
}

#[test]
fn criterion_03_enumeration_pipeline() {
    let (survivors, counts) = pipeline(3).unwrap();
    assert_eq!(
        (
            counts.total,
            counts.after_single_excitation,
            counts.after_forbidden_patterns
        ),
        (64, 24, 6)
    );
    let got: BTreeSet<String> = survivors.assignments.iter().map(|a| a.to_string()).collect();
    let expected: BTreeSet<String> = [
        "1+|0+|0+", "0+|1+|0+", "0+|0+|1+",
        "1-|0-|0-", "0-|1-|0-", "0-|0-|1-",
    ]
    .iter()
    .map(|t| t.to_string())
    .collect();
    assert_eq!(got, expected);
    println!("criterion 03 PASS: pipeline 64 -> 24 -> 6, survivors are the all-equal-x classes");
}

#[test]
fn criterion_04_weight_contradiction() {
    let (survivors, _) = pipeline(3).unwrap();
    for a in &survivors.assignments {
        assert_eq!(survivor_weight(a), Ratio::new(1, 12));
    }
    assert_eq!(
        quantum_weight_accounting(&survivors).unwrap(),
        Ratio::new(1, 2)
    );
    println!("criterion 04 PASS: six survivors at 1/12 each sum to 1/2 instead of 1");
}

#[test]
fn criterion_05_inconsistency_fraction() {
    for x_choice in [Sign::Plus, Sign::Minus] {
        let report = counterfactual_completion(3, x_choice).unwrap();
        assert_eq!(report.verdict, Verdict::ContradictionFound);
        let f = report.inconsistency_fraction.unwrap();
        assert_eq!((f.num, f.den), (1, 6), "branch {x_choice}");
    }
    println!("criterion 05 PASS: counterfactual completion yields exactly 1/6 on both branches");
}

#[test]
fn criterion_06_family_separation() {
    for n in [3usize, 5, 7, 9, 11] {
        let report = forbidden_witnesses(StateFamily::W, n).unwrap();
        assert_eq!(report.verdict, Verdict::ContradictionFound, "W_{n}");
        assert!(!report.witnesses.is_empty(), "W_{n}");
    }
    for n in 1..=11usize {
        let report = forbidden_witnesses(StateFamily::Ghz, n).unwrap();
        assert_eq!(report.verdict, Verdict::NoContradiction, "GHZ_{n}");
        assert!(report.witnesses.is_empty(), "GHZ_{n}");
    }
    let bell = forbidden_witnesses(StateFamily::Bell, 2).unwrap();
    assert_eq!(bell.verdict, Verdict::NoContradiction);
    assert!(bell.witnesses.is_empty());
    println!(
        "criterion 06 PASS: witnesses nonempty for W_3..11 (odd), empty for GHZ_1..11 and W_2"
    );
}

#[test]
fn criterion_07_ghz_conditional_is_flat() {
    for n in [2usize, 3, 5] {
        // all sign chains on the first n−1 sites
        for mask in 0..(1u32 << (n - 1)) {
            let mut state = ghz_state(n).unwrap();
            for site in 0..n - 1 {
                let r = if (mask >> site) & 1 == 1 {
                    SiteResult::Minus
                } else {
                    SiteResult::Plus
                };
                state = state.project(site, Basis::X, r).unwrap();
            }
            let settings = MeasurementSettings::one_z(n, n - 1);
            let dist = state.distribution(&settings).unwrap();
            let p1: f64 = dist
                .iter()
                .filter(|(k, _)| k.0[n - 1] == SiteResult::One)
                .map(|(_, v)| v)
                .sum();
            assert!((p1 - 0.5).abs() < 1e-12, "n={n} mask={mask}: {p1}");
        }
    }
    println!("criterion 07 PASS: GHZ conditional Z distribution is {{0: 1/2, 1: 1/2}}");
}

#[test]
fn criterion_08_preparation_fidelity() {
    for n in 1..=16usize {
        let config = PreparationConfig::new(n, 0.9, 1.0, 2).unwrap();
        let tau = tau_pi_half(&config);
        let fid = evolve(&config, tau).unwrap().w_fidelity();
        assert!((fid - 1.0).abs() < 1e-9, "n={n}: fidelity {fid}");
        for i in 0..100 {
            let t = 2.0 * tau * i as f64 / 99.0;
            let closed = evolve(&config, t).unwrap();
            let expm = evolve_matrix_exponential(&config, t).unwrap();
            for (a, b) in closed.amplitudes().iter().zip(expm.amplitudes()) {
                assert!((a - b).norm() < 1e-10, "n={n} t={t}");
            }
        }
    }
    println!("criterion 08 PASS: pi/2-pulse fidelity 1 within 1e-9 for N <= 16; closed form matches matrix exponential within 1e-10");
}

#[test]
fn criterion_09_bellmermin_convergence() {
    // 20 (A, n) pairs spanning angles xi in {0, pi/6, ..., pi}
    let angles: Vec<f64> = (0..7).map(|k| k as f64 * std::f64::consts::PI / 6.0).collect();
    let mut grid = Vec::new();
    for (i, &xi) in angles.iter().enumerate() {
        let n = PreparedDirection::new([xi.sin(), 0.0, xi.cos()]).unwrap();
        // three magnitude/offset variants; drop one to land on 20 pairs
        let variants: &[(f64, f64)] = if i == 0 {
            &[(0.0, 1.0), (0.5, 2.0)]
        } else {
            &[(0.0, 1.0), (0.5, 2.0), (-1.0, 0.7)]
        };
        for &(a0, scale) in variants {
            grid.push((
                Observable {
                    a0,
                    a1: [0.0, 0.0, scale],
                },
                n,
            ));
        }
    }
    assert_eq!(grid.len(), 20);
    for (idx, (a, n)) in grid.iter().enumerate() {
        let stats = sample_mean(a, n, 1_000_000, 0xACCE5 + idx as u64).unwrap();
        let expected = closed_form_mean(a, n);
        let diff = (stats.mean - expected).abs();
        assert!(
            diff <= 4.0 * stats.stderr + 1e-12,
            "pair {idx}: |{} - {expected}| vs 4×{}",
            stats.mean,
            stats.stderr
        );
    }
    // sigma_z on |1> is deterministic: +1 every sample
    let stats = sample_mean(
        &Observable::sigma_z(),
        &PreparedDirection::z(),
        1_000_000,
        1,
    )
    .unwrap();
    assert_eq!(stats.mean, 1.0);
    assert_eq!(stats.stderr, 0.0);
    println!("criterion 09 PASS: sample means within 4 standard errors on the 20-point grid; sigma_z on |1> deterministic");
}

#[test]
fn criterion_10_quantum_wins_scan() {
    for n in 1..=12usize {
        // brute-force oracle over the two all-equal X outcomes
        let state = w_state(n).unwrap();
        let settings = MeasurementSettings::all_x(n);
        let all_plus = Outcome(vec![SiteResult::Plus; n]);
        let all_minus = Outcome(vec![SiteResult::Minus; n]);
        let brute = state.probability(&settings, &all_plus).unwrap()
            + state.probability(&settings, &all_minus).unwrap();
        let closed = wnogo_core::all_equal_x_probability(n)
            .unwrap()
            .to_f64()
            .unwrap();
        assert!((brute - closed).abs() < 1e-12, "n={n}: {brute} vs {closed}");
    }
    assert_eq!(
        wnogo_core::all_equal_x_probability(3).unwrap(),
        Ratio::new(3, 4)
    );
    assert!(wnogo_core::all_equal_x_probability(9).unwrap() < Ratio::new(1, 20));
    println!("criterion 10 PASS: all-equal-X probability equals n/2^(n-1) for n <= 12, is 3/4 at n=3 and below 0.05 by n=9");
}

#[test]
fn criterion_11a_randomized_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for case in 0..1000 {
        let n = rng.gen_range(1..=6);
        let amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let state = match Statevector::from_amplitudes(n, amps) {
            Ok(state) => state,
            Err(_) => continue, // astronomically unlikely zero draw
        };
        assert!((state.norm() - 1.0).abs() < 1e-12, "case {case}");
        let bases: Vec<Basis> = (0..n)
            .map(|_| if rng.gen_bool(0.5) { Basis::Z } else { Basis::X })
            .collect();
        let settings = MeasurementSettings(bases);
        let total: f64 = state.distribution(&settings).unwrap().values().sum();
        assert!((total - 1.0).abs() < 1e-12, "case {case}: Parseval {total}");
    }
    println!("criterion 11a PASS: normalization and Parseval on 1000 randomized draws");
}

#[test]
fn criterion_11b_rule2_equivalence_exhaustive() {
    for n in [3usize, 5, 7] {
        let state = w_state(n).unwrap();
        let single = rule_single_excitation(&enumerate_all(n).unwrap());
        let filtered = rule_forbidden_patterns(&single).unwrap();
        for a in &single.assignments {
            let embeds_zero = (0..n).any(|k| {
                let settings = MeasurementSettings::one_z(n, k);
                state
                    .probability(&settings, &a.readout(&settings))
                    .unwrap()
                    < 1e-24
            });
            assert_eq!(!filtered.assignments.contains(a), embeds_zero, "n={n} {a}");
        }
    }
    println!("criterion 11b PASS: rule-2 removals coincide with zero-amplitude embeddings for odd n <= 7");
}

#[test]
fn criterion_11c_cli_determinism() {
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_wnogo"))
            .args(args)
            .output()
            .expect("binary runs");
        assert!(out.status.success(), "args {args:?}: {:?}", out);
        out.stdout
    };
    for args in [
        vec!["contradiction", "--n", "3", "--family", "w"],
        vec!["enumerate", "--n", "3"],
        vec!["prepare", "--n", "4", "--coupling", "1.0", "--points", "50"],
        vec![
            "bellmermin", "--samples", "200000", "--seed", "42", "--observable", "0,1,0,0",
            "--direction", "0,0,1",
        ],
        vec!["scan", "--max-n", "12"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first, second, "non-deterministic output for {args:?}");
    }
    println!("criterion 11c PASS: identical seeded invocations are byte-identical");
}

#[test]
fn witness_soundness_and_cross_module_consistency() {
    // every reported witness is exactly forbidden and LHV-supported; every
    // rule-2 removal corresponds to a zero-probability outcome and back
    for n in [3usize, 5] {
        let report = forbidden_witnesses(StateFamily::W, n).unwrap();
        for w in &report.witnesses {
            assert_eq!(w.quantum_probability.num, 0);
            assert!(w.lhv_probability.num > 0);
            let settings = s(&w.settings);
            let outcome = o(&w.outcome);
            let verdict = exact_zero_test(n, &settings, &outcome).unwrap();
            assert!(verdict.is_zero && verdict.exact);
        }
    }
    // LHV-side predictions of the survivor ensemble at n = 3
    let (survivors, _) = pipeline(3).unwrap();
    let lhv_all_equal = lhv_outcome_probability(&survivors, &s("XXX"), &o("+++")).unwrap()
        + lhv_outcome_probability(&survivors, &s("XXX"), &o("---")).unwrap();
    assert_eq!(lhv_all_equal, Ratio::from_integer(1));
    assert_eq!(
        lhv_outcome_probability(&survivors, &s("ZXX"), &o("1+-")).unwrap(),
        Ratio::from_integer(0)
    );
    // exhaustive converse at n = 3: within the scanned family, zero quantum
    // probability iff removed from the LHV support
    let w3 = w_state(3).unwrap();
    for settings in [s("ZXX"), s("XZX"), s("XXZ")] {
        for outcome in all_outcomes(&settings) {
            let qp = w3.probability(&settings, &outcome).unwrap();
            let lhv_p =
                lhv_outcome_probability(&survivors, &settings, &outcome).unwrap();
            if qp < 1e-24 {
                assert_eq!(lhv_p, Ratio::from_integer(0), "{settings} {outcome}");
            }
        }
    }
    println!("witness soundness PASS: all witnesses exactly forbidden yet LHV-supported");
}
