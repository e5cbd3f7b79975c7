//! Dense statevector representation with mixed Z/X-basis measurement
//! machinery.
//!
//! States live over the computational (Z) basis of `n` qubits. Site 0 is the
//! leftmost ket label and a set bit means |1⟩. The X eigenbasis is fixed by
//! σ_x|±⟩ = ±|±⟩ with
//!
//! ```text
//! |+⟩ = (|1⟩ + |0⟩)/√2,   |−⟩ = (|1⟩ − |0⟩)/√2
//! ```
//!
//! so ⟨+|0⟩ = ⟨+|1⟩ = ⟨−|1⟩ = 1/√2 and ⟨−|0⟩ = −1/√2. The sign convention
//! matters: the exact zero-amplitude identities for W states depend on it.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on dense representation size (2^20 amplitudes).
pub const MAX_QUBITS: usize = 20;

/// Tolerance used for generic floating-point zero/normalization checks.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StateError {
    #[error("number of qubits must be at least 1")]
    ZeroQubits,
    #[error("{requested} qubits exceeds the dense-representation limit of {max}")]
    TooManyQubits { requested: usize, max: usize },
    #[error("settings length {settings} does not match state with {qubits} qubits")]
    SettingsLengthMismatch { settings: usize, qubits: usize },
    #[error("outcome length {outcome} does not match settings length {settings}")]
    OutcomeLengthMismatch { outcome: usize, settings: usize },
    #[error("outcome label {label} at site {site} does not match basis {basis} there")]
    OutcomeKindMismatch {
        site: usize,
        label: SiteResult,
        basis: Basis,
    },
    #[error("site index {site} out of range for {qubits} qubits")]
    SiteOutOfRange { site: usize, qubits: usize },
    #[error("projection onto a zero-probability outcome")]
    ZeroProbabilityProjection,
    #[error("cannot parse '{text}': unexpected character '{found}' at position {position}")]
    Parse {
        text: String,
        position: usize,
        found: char,
    },
}

/// Measurement basis choice at a single site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Z => write!(f, "Z"),
            Basis::X => write!(f, "X"),
        }
    }
}

/// Sign of an X-basis result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// Result label at a single site.
///
/// Z sites carry the labels {0, 1}; the eigenvalue map is |1⟩ → +1 and
/// |0⟩ → −1. X sites carry {+, −} with |±⟩ → ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SiteResult {
    Zero,
    One,
    Plus,
    Minus,
}

impl SiteResult {
    pub fn basis(self) -> Basis {
        match self {
            SiteResult::Zero | SiteResult::One => Basis::Z,
            SiteResult::Plus | SiteResult::Minus => Basis::X,
        }
    }

    /// Eigenvalue of the measured Pauli operator for this label.
    pub fn eigenvalue(self) -> i64 {
        match self {
            SiteResult::One | SiteResult::Plus => 1,
            SiteResult::Zero | SiteResult::Minus => -1,
        }
    }
}

impl fmt::Display for SiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiteResult::Zero => write!(f, "0"),
            SiteResult::One => write!(f, "1"),
            SiteResult::Plus => write!(f, "+"),
            SiteResult::Minus => write!(f, "-"),
        }
    }
}

/// Per-site choice of measurement basis, e.g. parsed from `"ZXX"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MeasurementSettings(pub Vec<Basis>);

impl MeasurementSettings {
    pub fn all_z(n: usize) -> Self {
        MeasurementSettings(vec![Basis::Z; n])
    }

    pub fn all_x(n: usize) -> Self {
        MeasurementSettings(vec![Basis::X; n])
    }

    /// Z at `site`, X everywhere else.
    pub fn one_z(n: usize, site: usize) -> Self {
        let mut bases = vec![Basis::X; n];
        bases[site] = Basis::Z;
        MeasurementSettings(bases)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self, StateError> {
        text.chars()
            .enumerate()
            .map(|(i, c)| match c {
                'Z' | 'z' => Ok(Basis::Z),
                'X' | 'x' => Ok(Basis::X),
                other => Err(StateError::Parse {
                    text: text.to_string(),
                    position: i,
                    found: other,
                }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(MeasurementSettings)
    }

    /// Indices of Z sites.
    pub fn z_sites(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, b)| **b == Basis::Z)
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for MeasurementSettings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// A joint outcome string, one label per site, e.g. parsed from `"1+-"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Outcome(pub Vec<SiteResult>);

impl Outcome {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self, StateError> {
        text.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(SiteResult::Zero),
                '1' => Ok(SiteResult::One),
                '+' => Ok(SiteResult::Plus),
                '-' => Ok(SiteResult::Minus),
                other => Err(StateError::Parse {
                    text: text.to_string(),
                    position: i,
                    found: other,
                }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Outcome)
    }

    /// Checks each label's kind against the settings.
    pub fn matches(&self, settings: &MeasurementSettings) -> Result<(), StateError> {
        if self.len() != settings.len() {
            return Err(StateError::OutcomeLengthMismatch {
                outcome: self.len(),
                settings: settings.len(),
            });
        }
        for (site, (&label, &basis)) in self.0.iter().zip(&settings.0).enumerate() {
            if label.basis() != basis {
                return Err(StateError::OutcomeKindMismatch { site, label, basis });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.0 {
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// All outcomes compatible with the given settings, in lexicographic order
/// (at each site Z: 0 before 1, X: + before −... ordering follows the
/// `SiteResult` derive).
pub fn all_outcomes(settings: &MeasurementSettings) -> Vec<Outcome> {
    let n = settings.len();
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0..(1u64 << n) {
        let results = settings
            .0
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let bit = (mask >> (n - 1 - i)) & 1 == 1;
                match (b, bit) {
                    (Basis::Z, false) => SiteResult::Zero,
                    (Basis::Z, true) => SiteResult::One,
                    (Basis::X, false) => SiteResult::Plus,
                    (Basis::X, true) => SiteResult::Minus,
                }
            })
            .collect();
        out.push(Outcome(results));
    }
    out
}

/// Dense complex statevector over the computational basis.
///
/// Immutable after construction; all operations return fresh values.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// Builds a state from raw amplitudes, normalizing them.
    pub fn from_amplitudes(
        num_qubits: usize,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self, StateError> {
        check_qubit_count(num_qubits)?;
        assert_eq!(
            amplitudes.len(),
            1 << num_qubits,
            "amplitude vector length must be 2^num_qubits"
        );
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < NORM_TOL {
            return Err(StateError::ZeroProbabilityProjection);
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Statevector {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Bit of `site` within basis index `idx` (site 0 = leftmost label).
    #[inline]
    pub fn bit(&self, idx: usize, site: usize) -> bool {
        (idx >> (self.num_qubits - 1 - site)) & 1 == 1
    }

    /// Overlap ⟨other|self⟩.
    pub fn overlap(&self, other: &Statevector) -> Complex64 {
        assert_eq!(self.num_qubits, other.num_qubits);
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| b.conj() * a)
            .sum()
    }

    /// Mixed-basis amplitude ⟨outcome|state⟩.
    ///
    /// Each Z-site bra selects the matching bit; each X-site bra contributes
    /// the Eq.-style coefficients ⟨±|1⟩ = 1/√2, ⟨+|0⟩ = 1/√2, ⟨−|0⟩ = −1/√2.
    pub fn amplitude(
        &self,
        settings: &MeasurementSettings,
        outcome: &Outcome,
    ) -> Result<Complex64, StateError> {
        self.check_settings(settings)?;
        outcome.matches(settings)?;
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut total = Complex64::new(0.0, 0.0);
        'idx: for (idx, &amp) in self.amplitudes.iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut coeff = 1.0;
            for (site, &label) in outcome.0.iter().enumerate() {
                let bit = self.bit(idx, site);
                match label {
                    SiteResult::Zero => {
                        if bit {
                            continue 'idx;
                        }
                    }
                    SiteResult::One => {
                        if !bit {
                            continue 'idx;
                        }
                    }
                    SiteResult::Plus => coeff *= inv_sqrt2,
                    SiteResult::Minus => coeff *= if bit { inv_sqrt2 } else { -inv_sqrt2 },
                }
            }
            total += amp * coeff;
        }
        Ok(total)
    }

    /// |⟨outcome|state⟩|².
    pub fn probability(
        &self,
        settings: &MeasurementSettings,
        outcome: &Outcome,
    ) -> Result<f64, StateError> {
        Ok(self.amplitude(settings, outcome)?.norm_sqr())
    }

    /// Full outcome distribution for the given settings; values sum to 1.
    pub fn distribution(
        &self,
        settings: &MeasurementSettings,
    ) -> Result<BTreeMap<Outcome, f64>, StateError> {
        self.check_settings(settings)?;
        let mut map = BTreeMap::new();
        for outcome in all_outcomes(settings) {
            let p = self.probability(settings, &outcome)?;
            map.insert(outcome, p);
        }
        Ok(map)
    }

    /// Projects onto the given single-site result and renormalizes.
    pub fn project(
        &self,
        site: usize,
        basis: Basis,
        result: SiteResult,
    ) -> Result<Statevector, StateError> {
        if site >= self.num_qubits {
            return Err(StateError::SiteOutOfRange {
                site,
                qubits: self.num_qubits,
            });
        }
        if result.basis() != basis {
            return Err(StateError::OutcomeKindMismatch {
                site,
                label: result,
                basis,
            });
        }
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut projected = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        match result {
            SiteResult::Zero | SiteResult::One => {
                let want = result == SiteResult::One;
                for (idx, &amp) in self.amplitudes.iter().enumerate() {
                    if self.bit(idx, site) == want {
                        projected[idx] = amp;
                    }
                }
            }
            SiteResult::Plus | SiteResult::Minus => {
                // |±⟩⟨±| acting on the site: new pair is ⟨±|ψ_site⟩ |±⟩.
                let sign = if result == SiteResult::Plus { 1.0 } else { -1.0 };
                let bit_mask = 1usize << (self.num_qubits - 1 - site);
                for idx0 in 0..self.amplitudes.len() {
                    if idx0 & bit_mask != 0 {
                        continue;
                    }
                    let idx1 = idx0 | bit_mask;
                    // ⟨±|ψ⟩ with a0 on |0⟩, a1 on |1⟩
                    let inner =
                        (self.amplitudes[idx1] + sign * self.amplitudes[idx0]) * inv_sqrt2;
                    // |±⟩ components: on |1⟩: 1/√2, on |0⟩: ±1/√2
                    projected[idx1] = inner * inv_sqrt2;
                    projected[idx0] = inner * sign * inv_sqrt2;
                }
            }
        }
        let norm_sq: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq < NORM_TOL * NORM_TOL {
            return Err(StateError::ZeroProbabilityProjection);
        }
        Statevector::from_amplitudes(self.num_qubits, projected)
    }

    fn check_settings(&self, settings: &MeasurementSettings) -> Result<(), StateError> {
        if settings.len() != self.num_qubits {
            return Err(StateError::SettingsLengthMismatch {
                settings: settings.len(),
                qubits: self.num_qubits,
            });
        }
        Ok(())
    }
}

fn check_qubit_count(n: usize) -> Result<(), StateError> {
    if n == 0 {
        return Err(StateError::ZeroQubits);
    }
    if n > MAX_QUBITS {
        return Err(StateError::TooManyQubits {
            requested: n,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// |W⟩_n: one excitation shared equally and coherently, amplitude 1/√n on
/// each single-excitation string. `w_state(2)` is the Bell state
/// (|10⟩+|01⟩)/√2.
pub fn w_state(n: usize) -> Result<Statevector, StateError> {
    check_qubit_count(n)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    let coeff = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    for site in 0..n {
        amps[1 << (n - 1 - site)] = coeff;
    }
    Statevector::from_amplitudes(n, amps)
}

/// |GHZ⟩_n = (|1…1⟩ + |0…0⟩)/√2.
pub fn ghz_state(n: usize) -> Result<Statevector, StateError> {
    check_qubit_count(n)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    let coeff = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[0] = coeff;
    amps[(1 << n) - 1] = coeff;
    Statevector::from_amplitudes(n, amps)
}

/// Shape of the settings string, as classified for the exact integer tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SettingsShape {
    AllZ,
    AllX,
    /// Exactly one Z site, X everywhere else.
    OneZ(usize),
    Other,
}

pub fn classify_settings(settings: &MeasurementSettings) -> SettingsShape {
    let z_sites = settings.z_sites();
    match z_sites.len() {
        0 => SettingsShape::AllX,
        n if n == settings.len() => SettingsShape::AllZ,
        1 => SettingsShape::OneZ(z_sites[0]),
        _ => SettingsShape::Other,
    }
}

/// Verdict of a zero-amplitude test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroVerdict {
    pub is_zero: bool,
    /// True when decided by exact integer arithmetic, false when decided by
    /// the 1e-12 floating fallback.
    pub exact: bool,
}

/// Integer numerator of a W_n mixed-basis amplitude within the supported
/// settings family.
///
/// The amplitude of |W⟩_n on an {all-Z, all-X, one-Z-rest-X} outcome equals
/// an integer divided by √n·2^(x/2) with x the number of X sites, so
/// zero-ness is decided exactly. Returns `None` for unsupported shapes.
pub fn w_amplitude_numerator(
    n: usize,
    settings: &MeasurementSettings,
    outcome: &Outcome,
) -> Option<i64> {
    if settings.len() != n {
        return None;
    }
    outcome.matches(settings).ok()?;
    match classify_settings(settings) {
        SettingsShape::AllZ => {
            // Nonzero only on single-excitation strings.
            let ones = outcome
                .0
                .iter()
                .filter(|&&r| r == SiteResult::One)
                .count();
            Some(if ones == 1 { 1 } else { 0 })
        }
        SettingsShape::AllX => {
            // Σ_j ∏_{i≠j} σ_i = (∏ σ) Σ_j σ_j
            let prod: i64 = outcome.0.iter().map(|r| r.eigenvalue()).product();
            let sum: i64 = outcome.0.iter().map(|r| r.eigenvalue()).sum();
            Some(prod * sum)
        }
        SettingsShape::OneZ(k) => {
            let signs: Vec<i64> = outcome
                .0
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, r)| r.eigenvalue())
                .collect();
            let prod: i64 = signs.iter().product();
            match outcome.0[k] {
                // Only the excitation-at-k term survives.
                SiteResult::One => Some(prod),
                // Σ_{j≠k} ∏_{i≠j,k} σ_i = (∏_{i≠k} σ_i) Σ_{j≠k} σ_j
                SiteResult::Zero => Some(prod * signs.iter().sum::<i64>()),
                _ => unreachable!("site k is a Z site"),
            }
        }
        SettingsShape::Other => None,
    }
}

/// Integer numerator of a GHZ_n amplitude within the same settings family,
/// with denominator √2·2^(x/2), x the number of X sites.
pub fn ghz_amplitude_numerator(
    n: usize,
    settings: &MeasurementSettings,
    outcome: &Outcome,
) -> Option<i64> {
    if settings.len() != n {
        return None;
    }
    outcome.matches(settings).ok()?;
    match classify_settings(settings) {
        SettingsShape::AllZ => {
            let all_one = outcome.0.iter().all(|&r| r == SiteResult::One);
            let all_zero = outcome.0.iter().all(|&r| r == SiteResult::Zero);
            Some(if all_one || all_zero { 1 } else { 0 })
        }
        SettingsShape::AllX => {
            // ⟨σ…σ|1…1⟩ term is +1; ⟨σ…σ|0…0⟩ term is ∏σ.
            let prod: i64 = outcome.0.iter().map(|r| r.eigenvalue()).product();
            Some(1 + prod)
        }
        SettingsShape::OneZ(k) => {
            // The Z result picks exactly one of the two branches.
            let prod: i64 = outcome
                .0
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, r)| r.eigenvalue())
                .product();
            match outcome.0[k] {
                SiteResult::One => Some(1),
                SiteResult::Zero => Some(prod),
                _ => unreachable!("site k is a Z site"),
            }
        }
        SettingsShape::Other => None,
    }
}

/// Decides whether ⟨outcome|W_n⟩ is exactly zero.
///
/// Uses the integer identity within the supported settings family; falls
/// back to a flagged floating-point comparison otherwise.
pub fn exact_zero_test(
    n: usize,
    settings: &MeasurementSettings,
    outcome: &Outcome,
) -> Result<ZeroVerdict, StateError> {
    outcome.matches(settings)?;
    if let Some(num) = w_amplitude_numerator(n, settings, outcome) {
        return Ok(ZeroVerdict {
            is_zero: num == 0,
            exact: true,
        });
    }
    let amp = w_state(n)?.amplitude(settings, outcome)?;
    Ok(ZeroVerdict {
        is_zero: amp.norm() < NORM_TOL,
        exact: false,
    })
}
