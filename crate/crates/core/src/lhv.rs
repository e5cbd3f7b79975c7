//! Local-hidden-variable ensembles: the bracket states (z, x) per qubit,
//! the two element-of-reality constraint rules, and exact rational
//! bookkeeping over assignment counts.
//!
//! Rule 1 keeps the single-quanta structure (exactly one z = 1 per
//! element). Rule 2 removes every assignment that embeds a mixed-basis
//! outcome with exactly zero quantum probability on the W state; it is
//! generated from the integer zero-amplitude test rather than hard-coded,
//! so for N = 3 it reduces to "a 0 together with a + and a − is excluded".

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::statevector::{
    exact_zero_test, Basis, MeasurementSettings, Outcome, Sign, SiteResult, StateError,
};

/// Exhaustive enumeration guard: 4^n assignments.
pub const MAX_ENUM_QUBITS: usize = 12;

#[derive(Debug, Error, PartialEq)]
pub enum LhvError {
    #[error("{n} qubits exceeds the 4^n enumeration guard of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error("settings length {settings} does not match ensemble over {n} qubits")]
    LengthMismatch { settings: usize, n: usize },
    #[error("weight accounting is defined for the n=3 survivor pipeline, got n={0}")]
    AccountingUnsupported(usize),
    #[error("assignment outside the survivor set: {0}")]
    NotASurvivor(String),
    #[error(transparent)]
    State(#[from] StateError),
}

/// One local-realistic bracket state: per qubit a (z, x) pair of elements
/// of reality, stored as bitmasks (bit i = site i; z bit set means z = 1,
/// x bit set means x = −).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LhvAssignment {
    n: u8,
    z_bits: u16,
    x_minus_bits: u16,
}

impl LhvAssignment {
    pub fn new(pairs: &[(bool, Sign)]) -> Self {
        assert!(pairs.len() <= MAX_ENUM_QUBITS + 4);
        let mut z_bits = 0u16;
        let mut x_minus_bits = 0u16;
        for (i, &(z, x)) in pairs.iter().enumerate() {
            if z {
                z_bits |= 1 << i;
            }
            if x == Sign::Minus {
                x_minus_bits |= 1 << i;
            }
        }
        LhvAssignment {
            n: pairs.len() as u8,
            z_bits,
            x_minus_bits,
        }
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn z(&self, site: usize) -> bool {
        self.z_bits >> site & 1 == 1
    }

    pub fn x(&self, site: usize) -> Sign {
        if self.x_minus_bits >> site & 1 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn excitation_count(&self) -> u32 {
        self.z_bits.count_ones()
    }

    /// The outcome this assignment deterministically produces under the
    /// given settings: z labels at Z sites, x labels at X sites.
    pub fn readout(&self, settings: &MeasurementSettings) -> Outcome {
        Outcome(
            settings
                .0
                .iter()
                .enumerate()
                .map(|(site, basis)| match basis {
                    Basis::Z => {
                        if self.z(site) {
                            SiteResult::One
                        } else {
                            SiteResult::Zero
                        }
                    }
                    Basis::X => match self.x(site) {
                        Sign::Plus => SiteResult::Plus,
                        Sign::Minus => SiteResult::Minus,
                    },
                })
                .collect(),
        )
    }

    /// True when some readout within the {one-Z-rest-X} family has exactly
    /// zero quantum probability on |W⟩_n.
    pub fn embeds_forbidden_pattern(&self) -> Result<bool, LhvError> {
        let n = self.len();
        for site in 0..n {
            let settings = MeasurementSettings::one_z(n, site);
            let outcome = self.readout(&settings);
            if exact_zero_test(n, &settings, &outcome)?.is_zero {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for LhvAssignment {
    /// Renders as `1+|0+|0+`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for site in 0..self.len() {
            if site > 0 {
                write!(f, "|")?;
            }
            write!(f, "{}{}", if self.z(site) { 1 } else { 0 }, self.x(site))?;
        }
        Ok(())
    }
}

/// A set of assignments with optional rational weights; unweighted
/// ensembles are read uniformly.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub n: usize,
    pub assignments: Vec<LhvAssignment>,
    pub weights: Option<Vec<Ratio<i64>>>,
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    fn filtered<F: FnMut(&LhvAssignment) -> bool>(&self, mut keep: F) -> Ensemble {
        Ensemble {
            n: self.n,
            assignments: self
                .assignments
                .iter()
                .copied()
                .filter(|a| keep(a))
                .collect(),
            weights: None,
        }
    }
}

/// All 4^n bracket states, unweighted, in canonical order.
pub fn enumerate_all(n: usize) -> Result<Ensemble, LhvError> {
    if n == 0 || n > MAX_ENUM_QUBITS {
        return Err(LhvError::TooManyQubits {
            n,
            max: MAX_ENUM_QUBITS,
        });
    }
    let count = 1usize << (2 * n);
    let mut assignments = Vec::with_capacity(count);
    for code in 0..count {
        assignments.push(LhvAssignment {
            n: n as u8,
            z_bits: (code >> n) as u16,
            x_minus_bits: (code & ((1 << n) - 1)) as u16,
        });
    }
    Ok(Ensemble {
        n,
        assignments,
        weights: None,
    })
}

/// Rule 1: exactly one z = 1 (one excitation, N−1 zeros).
pub fn rule_single_excitation(e: &Ensemble) -> Ensemble {
    e.filtered(|a| a.excitation_count() == 1)
}

/// Rule 2: removes assignments embedding a quantum-forbidden pattern
/// (a z = 0 site whose complementary x values are balanced).
pub fn rule_forbidden_patterns(e: &Ensemble) -> Result<Ensemble, LhvError> {
    let mut assignments = Vec::new();
    for a in &e.assignments {
        if !a.embeds_forbidden_pattern()? {
            assignments.push(*a);
        }
    }
    Ok(Ensemble {
        n: e.n,
        assignments,
        weights: None,
    })
}

/// Stage counts of the full filtering pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct PipelineCounts {
    pub total: usize,
    pub after_single_excitation: usize,
    pub after_forbidden_patterns: usize,
}

/// Runs enumerate → rule 1 → rule 2 and returns the survivors with counts.
pub fn pipeline(n: usize) -> Result<(Ensemble, PipelineCounts), LhvError> {
    let all = enumerate_all(n)?;
    let single = rule_single_excitation(&all);
    let survivors = rule_forbidden_patterns(&single)?;
    let counts = PipelineCounts {
        total: all.len(),
        after_single_excitation: single.len(),
        after_forbidden_patterns: survivors.len(),
    };
    Ok((survivors, counts))
}

/// Weight accounting at n = 3: each survivor carries the exact
/// quantum probability of its defining (one-Z-rest-X, z = 1) outcome class
/// — 1/12 — and the total comes out to 1/2 instead of 1.
pub fn quantum_weight_accounting(survivors: &Ensemble) -> Result<Ratio<i64>, LhvError> {
    if survivors.is_empty() {
        return Ok(Ratio::from_integer(0));
    }
    if survivors.n != 3 {
        return Err(LhvError::AccountingUnsupported(survivors.n));
    }
    let mut total = Ratio::from_integer(0);
    for a in &survivors.assignments {
        if a.excitation_count() != 1 || a.embeds_forbidden_pattern()? {
            return Err(LhvError::NotASurvivor(a.to_string()));
        }
        total += survivor_weight(a);
    }
    Ok(total)
}

/// Weight of one survivor: |⟨1, x-string | W_n⟩|² at its z = 1 site, an
/// exact rational 1/(n·2^(n−1)).
pub fn survivor_weight(a: &LhvAssignment) -> Ratio<i64> {
    let n = a.len() as i64;
    Ratio::new(1, n * (1i64 << (n - 1)))
}

/// Fraction of the ensemble whose elements of reality reproduce `outcome`
/// under `settings`, as an exact rational (weights honored when present).
pub fn lhv_outcome_probability(
    e: &Ensemble,
    settings: &MeasurementSettings,
    outcome: &Outcome,
) -> Result<Ratio<i64>, LhvError> {
    if settings.len() != e.n {
        return Err(LhvError::LengthMismatch {
            settings: settings.len(),
            n: e.n,
        });
    }
    outcome.matches(settings)?;
    if e.is_empty() {
        return Ok(Ratio::from_integer(0));
    }
    match &e.weights {
        None => {
            let hits = e
                .assignments
                .iter()
                .filter(|a| &a.readout(settings) == outcome)
                .count();
            Ok(Ratio::new(hits as i64, e.len() as i64))
        }
        Some(weights) => {
            let total: Ratio<i64> = weights.iter().sum();
            let hit: Ratio<i64> = e
                .assignments
                .iter()
                .zip(weights)
                .filter(|(a, _)| &a.readout(settings) == outcome)
                .map(|(_, w)| *w)
                .sum();
            Ok(hit / total)
        }
    }
}
