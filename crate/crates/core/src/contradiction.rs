//! The full no-go argument: counterfactual completion, forbidden-outcome
//! witnesses, the interference decomposition behind them, and the
//! all-equal-X scan.
//!
//! A witness is an outcome with exactly zero quantum probability (decided
//! by integer arithmetic, never by a floating near-zero) that the
//! local-realistic ensemble nevertheless predicts with positive rational
//! probability. For W states with odd N ≥ 3 witnesses always exist; for
//! the Bell state and for GHZ states the free x-completion can always be
//! chosen to dodge every forbidden pattern, so the scan comes back empty.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lhv::{Ensemble, LhvAssignment, LhvError};
use crate::statevector::{
    all_outcomes, ghz_amplitude_numerator, w_amplitude_numerator, Basis, MeasurementSettings,
    Outcome, Sign, StateError,
};

/// Scan guard: exhaustive outcome scans up to 2^12.
pub const MAX_SCAN_QUBITS: usize = 12;
/// Closed-form all-equal-X scan guard.
pub const MAX_CLOSED_FORM_QUBITS: usize = 24;

#[derive(Debug, Error, PartialEq)]
pub enum ContradictionError {
    #[error("{n} qubits exceeds the exhaustive-scan guard of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error("counterfactual completion is defined for n = 3, got {0}")]
    CompletionUnsupported(usize),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Lhv(#[from] LhvError),
}

/// State families covered by the argument. `Bell` is |W⟩_2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StateFamily {
    W,
    Ghz,
    Bell,
}

impl StateFamily {
    pub fn parse(text: &str) -> Option<StateFamily> {
        match text.to_ascii_lowercase().as_str() {
            "w" => Some(StateFamily::W),
            "ghz" => Some(StateFamily::Ghz),
            "bell" => Some(StateFamily::Bell),
            _ => None,
        }
    }
}

/// Exact rational rendered for JSON output alongside a decimal
/// approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
    pub approx: f64,
}

impl From<Ratio<i64>> for Fraction {
    fn from(r: Ratio<i64>) -> Self {
        Fraction {
            num: *r.numer(),
            den: *r.denom(),
            approx: r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

/// One contradiction witness: quantum-forbidden, LHV-predicted.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub settings: String,
    pub outcome: String,
    pub quantum_probability: Fraction,
    pub lhv_probability: Fraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ContradictionFound,
    NoContradiction,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContradictionReport {
    pub family: StateFamily,
    pub n: usize,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    /// Weight of the measurement classes whose completion is forced into a
    /// forbidden pattern for every free x-choice.
    pub inconsistency_fraction: Option<Fraction>,
    /// Size of the counterfactually completed ensemble used for readouts.
    pub ensemble_size: usize,
    pub notes: Vec<String>,
}

/// Exact quantum probability within the {all-Z, all-X, one-Z-rest-X}
/// settings family, as a rational; `None` outside the family.
pub fn exact_probability(
    family: StateFamily,
    n: usize,
    settings: &MeasurementSettings,
    outcome: &Outcome,
) -> Option<Ratio<i64>> {
    let x_sites = settings.0.iter().filter(|&&b| b == Basis::X).count() as u32;
    match family {
        StateFamily::W | StateFamily::Bell => {
            // amplitude = num / (√n · 2^(x/2))
            let num = w_amplitude_numerator(n, settings, outcome)?;
            Some(Ratio::new(num * num, (n as i64) << x_sites))
        }
        StateFamily::Ghz => {
            // amplitude = num / (√2 · 2^(x/2))
            let num = ghz_amplitude_numerator(n, settings, outcome)?;
            Some(Ratio::new(num * num, 2i64 << x_sites))
        }
    }
}

/// The scanned settings family: all-Z, all-X, and one Z at each site.
pub fn scan_settings(n: usize) -> Vec<MeasurementSettings> {
    let mut family = vec![
        MeasurementSettings::all_z(n),
        MeasurementSettings::all_x(n),
    ];
    for k in 0..n {
        let s = MeasurementSettings::one_z(n, k);
        if !family.contains(&s) {
            family.push(s);
        }
    }
    family
}

fn family_n(family: StateFamily, n: usize) -> Result<usize, ContradictionError> {
    let n = match family {
        StateFamily::Bell => 2,
        _ => n,
    };
    if n == 0 || n > MAX_SCAN_QUBITS {
        return Err(ContradictionError::TooManyQubits {
            n,
            max: MAX_SCAN_QUBITS,
        });
    }
    Ok(n)
}

/// True when the assignment's readout at some scanned settings has exactly
/// zero quantum probability.
fn embeds_forbidden(
    family: StateFamily,
    n: usize,
    a: &LhvAssignment,
    settings_family: &[MeasurementSettings],
) -> bool {
    settings_family.iter().any(|s| {
        exact_probability(family, n, s, &a.readout(s))
            .map(|p| p.is_zero())
            .unwrap_or(false)
    })
}

/// Z-basis strings with nonzero probability, as site-indexed bitmasks.
fn z_support(family: StateFamily, n: usize) -> Vec<u16> {
    match family {
        StateFamily::W | StateFamily::Bell => (0..n).map(|k| 1u16 << k).collect(),
        StateFamily::Ghz => vec![0, ((1u32 << n) - 1) as u16],
    }
}

/// Builds the counterfactually completed ensemble.
///
/// Every quantum-allowed class in the one-Z-rest-X family whose Z result
/// pins down the remaining z values (via the z element of reality and the
/// state's Z-basis support) must be represented. The x value at the Z site
/// is the free choice: completions that dodge every forbidden pattern are
/// preferred; when none exists, both are forced in and the class counts
/// toward the inconsistency fraction.
fn completion_ensemble(
    family: StateFamily,
    n: usize,
) -> Result<(Ensemble, Vec<Ratio<i64>>, usize), ContradictionError> {
    let settings_family = scan_settings(n);
    let support = z_support(family, n);
    let mut assignments: BTreeSet<LhvAssignment> = BTreeSet::new();
    // forced class weight per Z site; equal across sites by symmetry
    let mut forced_weight = vec![Ratio::from_integer(0); n];
    let mut forced_classes = 0usize;
    for k in 0..n {
        let settings = MeasurementSettings::one_z(n, k);
        for r in [false, true] {
            // unique z completion given z_k = r?
            let matching: Vec<u16> = support
                .iter()
                .copied()
                .filter(|&zb| (zb >> k) & 1 == u16::from(r))
                .collect();
            let [z_bits] = matching.as_slice() else {
                continue;
            };
            for x_mask in 0..(1u16 << (n - 1)) {
                // spread the n−1 observed x values over the sites ≠ k
                let mut pairs: Vec<(bool, Sign)> = Vec::with_capacity(n);
                let mut bit = 0;
                for site in 0..n {
                    if site == k {
                        pairs.push((r, Sign::Plus)); // x_k filled in below
                    } else {
                        let minus = (x_mask >> bit) & 1 == 1;
                        bit += 1;
                        pairs.push((
                            (z_bits >> site) & 1 == 1,
                            if minus { Sign::Minus } else { Sign::Plus },
                        ));
                    }
                }
                let class_outcome = LhvAssignment::new(&pairs).readout(&settings);
                let class_weight = exact_probability(family, n, &settings, &class_outcome)
                    .expect("one-Z settings are inside the exact family");
                if class_weight.is_zero() {
                    continue;
                }
                let candidates: Vec<LhvAssignment> = [Sign::Plus, Sign::Minus]
                    .into_iter()
                    .map(|x_k| {
                        let mut p = pairs.clone();
                        p[k] = (r, x_k);
                        LhvAssignment::new(&p)
                    })
                    .collect();
                let safe: Vec<LhvAssignment> = candidates
                    .iter()
                    .copied()
                    .filter(|a| !embeds_forbidden(family, n, a, &settings_family))
                    .collect();
                if safe.is_empty() {
                    forced_weight[k] += class_weight;
                    forced_classes += 1;
                    assignments.extend(candidates);
                } else {
                    assignments.extend(safe);
                }
            }
        }
    }
    let ensemble = Ensemble {
        n,
        assignments: assignments.into_iter().collect(),
        weights: None,
    };
    Ok((ensemble, forced_weight, forced_classes))
}

/// Exhaustive witness scan over {all-Z, all-X, one-Z-rest-X}.
pub fn forbidden_witnesses(
    family: StateFamily,
    n: usize,
) -> Result<ContradictionReport, ContradictionError> {
    let n = family_n(family, n)?;
    let settings_family = scan_settings(n);
    let (ensemble, forced_per_site, forced_classes) = completion_ensemble(family, n)?;
    // the fraction is reported per Z-site ordering; permutation symmetry
    // makes the per-site values identical
    debug_assert!(forced_per_site.windows(2).all(|w| w[0] == w[1]));
    let forced_weight = forced_per_site[0];
    let mut witnesses = Vec::new();
    for settings in &settings_family {
        // one pass over the ensemble per settings, then exact zero lookups
        let mut counts: BTreeMap<Outcome, usize> = BTreeMap::new();
        for a in &ensemble.assignments {
            *counts.entry(a.readout(settings)).or_insert(0) += 1;
        }
        for outcome in all_outcomes(settings) {
            let qp = exact_probability(family, n, settings, &outcome)
                .expect("scan family is inside the exact family");
            if !qp.is_zero() {
                continue;
            }
            let hits = counts.get(&outcome).copied().unwrap_or(0);
            if hits > 0 {
                witnesses.push(Witness {
                    settings: settings.to_string(),
                    outcome: outcome.to_string(),
                    quantum_probability: Ratio::from_integer(0).into(),
                    lhv_probability: Ratio::new(hits as i64, ensemble.len() as i64).into(),
                });
            }
        }
    }
    let verdict = if witnesses.is_empty() {
        Verdict::NoContradiction
    } else {
        Verdict::ContradictionFound
    };
    let mut notes = Vec::new();
    if family == StateFamily::W && n % 2 == 0 && n > 2 {
        notes.push(
            "the forbidden-pattern rule is vacuous for even N (no balanced complement of odd \
             length exists); the argument targets odd N"
                .to_string(),
        );
    }
    if forced_classes > 0 {
        notes.push(format!(
            "{forced_classes} measurement classes admit no consistent x completion"
        ));
    }
    Ok(ContradictionReport {
        family,
        n,
        verdict,
        witnesses,
        inconsistency_fraction: (!forced_weight.is_zero()).then(|| forced_weight.into()),
        ensemble_size: ensemble.len(),
        notes,
    })
}

/// The main-text chain at n = 3: the four (Z,X,X) classes with z = 1 on the
/// first site, z completion to (1,0,0), and the chosen x label on the first
/// qubit. Classes forced into a forbidden pattern for *both* x choices carry
/// the 1/6 inconsistency fraction; witnesses are the forbidden outcomes the
/// given branch runs into.
pub fn counterfactual_completion(
    n: usize,
    x_choice: Sign,
) -> Result<ContradictionReport, ContradictionError> {
    if n != 3 {
        return Err(ContradictionError::CompletionUnsupported(n));
    }
    let settings_family = scan_settings(3);
    let class_weight = Ratio::new(1, 12);
    let mut forced_weight = Ratio::from_integer(0);
    let mut witnesses = Vec::new();
    let mut ensemble_size = 0;
    for x2 in [Sign::Plus, Sign::Minus] {
        for x3 in [Sign::Plus, Sign::Minus] {
            let complete = |x1: Sign| {
                LhvAssignment::new(&[(true, x1), (false, x2), (false, x3)])
            };
            let embedded = |a: &LhvAssignment| -> Vec<(MeasurementSettings, Outcome)> {
                settings_family
                    .iter()
                    .filter_map(|s| {
                        let out = a.readout(s);
                        exact_probability(StateFamily::W, 3, s, &out)
                            .filter(|p| p.is_zero())
                            .map(|_| (s.clone(), out))
                    })
                    .collect()
            };
            let chosen = complete(x_choice);
            let other = complete(x_choice.flipped());
            let chosen_bad = embedded(&chosen);
            let other_bad = embedded(&other);
            ensemble_size += 2;
            // forced: neither free choice escapes
            if !chosen_bad.is_empty() && !other_bad.is_empty() {
                forced_weight += class_weight;
                for (settings, outcome) in chosen_bad {
                    witnesses.push(Witness {
                        settings: settings.to_string(),
                        outcome: outcome.to_string(),
                        quantum_probability: Ratio::from_integer(0).into(),
                        lhv_probability: class_weight.into(),
                    });
                }
            }
        }
    }
    Ok(ContradictionReport {
        family: StateFamily::W,
        n: 3,
        verdict: if witnesses.is_empty() {
            Verdict::NoContradiction
        } else {
            Verdict::ContradictionFound
        },
        witnesses,
        inconsistency_fraction: Some(forced_weight.into()),
        ensemble_size,
        notes: vec![format!("x completion branch: {x_choice}")],
    })
}

/// One term of the interference decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct TraceTerm {
    /// Originating computational basis string of |W⟩_3.
    pub basis_string: String,
    /// Ket part left on site 0 after the projection.
    pub site0_ket: char,
    /// Real coefficient of the conditional term (global 1/√3 included).
    pub coefficient: f64,
}

/// Per-term contributions to the conditional site-0 amplitude of |W⟩_3
/// after X projections on sites 1 and 2.
#[derive(Debug, Clone, Serialize)]
pub struct InterferenceTrace {
    pub x_results: [char; 2],
    pub terms: Vec<TraceTerm>,
    /// Summed |1⟩-part coefficient.
    pub one_sum: f64,
    /// Summed |0⟩-part coefficient; zero for opposite x results.
    pub zero_sum: f64,
}

/// Decomposes the destructive interference: |100⟩ projects onto the
/// |1⟩-part, |010⟩ and |001⟩ onto the |0⟩-part, and for opposite x results
/// the latter two cancel exactly.
pub fn interference_trace(x_results: (Sign, Sign)) -> InterferenceTrace {
    let inv = 1.0 / (2.0 * 3f64.sqrt());
    let (s1, s2) = (x_results.0.value() as f64, x_results.1.value() as f64);
    // ⟨σ|1⟩ = 1/√2, ⟨σ|0⟩ = sign(σ)/√2 per projected site
    let terms = vec![
        TraceTerm {
            basis_string: "100".into(),
            site0_ket: '1',
            coefficient: s1 * s2 * inv,
        },
        TraceTerm {
            basis_string: "010".into(),
            site0_ket: '0',
            coefficient: s2 * inv,
        },
        TraceTerm {
            basis_string: "001".into(),
            site0_ket: '0',
            coefficient: s1 * inv,
        },
    ];
    let one_sum = terms
        .iter()
        .filter(|t| t.site0_ket == '1')
        .map(|t| t.coefficient)
        .sum();
    let zero_sum = terms
        .iter()
        .filter(|t| t.site0_ket == '0')
        .map(|t| t.coefficient)
        .sum();
    InterferenceTrace {
        x_results: [
            if x_results.0 == Sign::Plus { '+' } else { '-' },
            if x_results.1 == Sign::Plus { '+' } else { '-' },
        ],
        terms,
        one_sum,
        zero_sum,
    }
}

/// Quantum probability that an all-X measurement on |W⟩_n yields all-equal
/// results: n/2^(n−1), exact.
pub fn all_equal_x_probability(n: usize) -> Result<Ratio<i64>, ContradictionError> {
    if n == 0 || n > MAX_CLOSED_FORM_QUBITS {
        return Err(ContradictionError::TooManyQubits {
            n,
            max: MAX_CLOSED_FORM_QUBITS,
        });
    }
    Ok(Ratio::new(n as i64, 1i64 << (n - 1)))
}

/// Table of all-equal-X probabilities up to `n_max`: local realism (per the
/// filtered ensemble) predicts all results equal, quantum mechanics drives
/// the probability of that event toward zero.
pub fn quantum_wins_scan(n_max: usize) -> Result<Vec<(usize, Ratio<i64>)>, ContradictionError> {
    if n_max == 0 || n_max > MAX_CLOSED_FORM_QUBITS {
        return Err(ContradictionError::TooManyQubits {
            n: n_max,
            max: MAX_CLOSED_FORM_QUBITS,
        });
    }
    (1..=n_max)
        .map(|n| all_equal_x_probability(n).map(|p| (n, p)))
        .collect()
}
