//! Rabi-oscillation preparation of W states.
//!
//! A preparation qubit `p` starts excited and exchange-couples to N ground
//! targets via H = −g√N (σ_p⁺ S⁻ + σ_p⁻ S⁺) with S± the normalized
//! collective raising/lowering operators. The dynamics closes on the
//! single-excitation sector, whose N+1 basis states are
//!
//! ```text
//! |p⟩ = |1⟩_p |0…0⟩,   |e_j⟩ = |0⟩_p |0…1_j…0⟩   (j = 1..N)
//! ```
//!
//! In the two-dimensional span of {|p⟩, |0⟩_p|W⟩_N} the evolution is a Rabi
//! oscillation at frequency g√N; a π/2 pulse at τ = π/(2g√N) lands exactly
//! on the W state. Both the closed form and an (N+1)-dimensional
//! eigendecomposition route are provided and must agree.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PreparationError {
    #[error("number of target qubits must be at least 1")]
    ZeroTargets,
    #[error("coupling must be positive, got {0}")]
    NonPositiveCoupling(f64),
    #[error("sample count must be at least 2, got {0}")]
    TooFewSamples(usize),
    #[error("negative time {0} rejected")]
    NegativeTime(f64),
}

/// Configuration of the exchange-coupling protocol.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PreparationConfig {
    /// Number of target qubits N.
    pub n: usize,
    /// Coupling constant g (rad/time, ħ = 1).
    pub coupling: f64,
    /// Total duration covered by `fidelity_curve`.
    pub duration: f64,
    /// Number of samples in `fidelity_curve`.
    pub samples: usize,
}

impl PreparationConfig {
    pub fn new(
        n: usize,
        coupling: f64,
        duration: f64,
        samples: usize,
    ) -> Result<Self, PreparationError> {
        if n == 0 {
            return Err(PreparationError::ZeroTargets);
        }
        if !(coupling > 0.0) {
            return Err(PreparationError::NonPositiveCoupling(coupling));
        }
        if samples < 2 {
            return Err(PreparationError::TooFewSamples(samples));
        }
        Ok(PreparationConfig {
            n,
            coupling,
            duration,
            samples,
        })
    }
}

/// State restricted to the single-excitation sector: index 0 is the
/// excitation on the preparation qubit, index j ≥ 1 the excitation on
/// target j.
#[derive(Debug, Clone)]
pub struct ExcitationSectorState {
    amplitudes: Vec<Complex64>,
}

impl ExcitationSectorState {
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn num_targets(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// |⟨0_p, W_N|ψ⟩|²: overlap with the target W state (excitation spread
    /// equally over the N targets, none on p).
    pub fn w_fidelity(&self) -> f64 {
        let n = self.num_targets() as f64;
        let overlap: Complex64 = self.amplitudes[1..]
            .iter()
            .map(|a| a / n.sqrt())
            .sum();
        overlap.norm_sqr()
    }

    /// |⟨p|ψ⟩|²: population still on the preparation qubit.
    pub fn p_population(&self) -> f64 {
        self.amplitudes[0].norm_sqr()
    }
}

/// π/2 pulse time τ = π/(2 g √N).
pub fn tau_pi_half(config: &PreparationConfig) -> f64 {
    std::f64::consts::PI / (2.0 * config.coupling * (config.n as f64).sqrt())
}

/// Evolves |1_p, 0…0⟩ for time `t` using the closed-form Rabi solution:
/// ψ(t) = cos(g√N t)|p⟩ + i sin(g√N t)|0_p, W_N⟩.
pub fn evolve(
    config: &PreparationConfig,
    t: f64,
) -> Result<ExcitationSectorState, PreparationError> {
    if t < 0.0 {
        return Err(PreparationError::NegativeTime(t));
    }
    let n = config.n;
    let omega = config.coupling * (n as f64).sqrt();
    let cos = (omega * t).cos();
    let sin = (omega * t).sin();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n + 1];
    amplitudes[0] = Complex64::new(cos, 0.0);
    let per_site = sin / (n as f64).sqrt();
    for a in amplitudes[1..].iter_mut() {
        *a = Complex64::new(0.0, per_site);
    }
    Ok(ExcitationSectorState { amplitudes })
}

/// Evolves the same initial state by exponentiating the (N+1)-dimensional
/// sector Hamiltonian via eigendecomposition. Independent cross-check of
/// `evolve`.
pub fn evolve_matrix_exponential(
    config: &PreparationConfig,
    t: f64,
) -> Result<ExcitationSectorState, PreparationError> {
    if t < 0.0 {
        return Err(PreparationError::NegativeTime(t));
    }
    let n = config.n;
    let dim = n + 1;
    // H|p⟩ = −g Σ_j |e_j⟩,  H|e_j⟩ = −g |p⟩  (real symmetric, rank 2)
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for j in 1..dim {
        h[(0, j)] = -config.coupling;
        h[(j, 0)] = -config.coupling;
    }
    let eig = h.symmetric_eigen();
    let mut psi0 = DVector::<f64>::zeros(dim);
    psi0[0] = 1.0;
    // ψ(t) = V e^{−iΛt} Vᵀ ψ0
    let coeffs = eig.eigenvectors.transpose() * psi0;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    for k in 0..dim {
        let phase = Complex64::from_polar(1.0, -eig.eigenvalues[k] * t);
        let ck = phase * coeffs[k];
        for (i, amp) in amplitudes.iter_mut().enumerate() {
            *amp += ck * eig.eigenvectors[(i, k)];
        }
    }
    Ok(ExcitationSectorState { amplitudes })
}

/// One point of the fidelity curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvePoint {
    pub time: f64,
    pub fidelity: f64,
}

/// Samples |⟨0_p, W_N|ψ(t)⟩|² on a uniform grid over `config.duration`.
pub fn fidelity_curve(config: &PreparationConfig) -> Result<Vec<CurvePoint>, PreparationError> {
    let step = config.duration / (config.samples - 1) as f64;
    (0..config.samples)
        .map(|i| {
            let time = i as f64 * step;
            let state = evolve(config, time)?;
            Ok(CurvePoint {
                time,
                fidelity: state.w_fidelity(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(n: usize, g: f64) -> PreparationConfig {
        PreparationConfig::new(n, g, 10.0, 101).unwrap()
    }

    #[test]
    fn initial_condition() {
        let state = evolve(&cfg(3, 1.0), 0.0).unwrap();
        assert_abs_diff_eq!(state.p_population(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(state.w_fidelity(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn pi_half_lands_on_w() {
        for n in [1, 3, 7, 16] {
            let config = cfg(n, 1.3);
            let tau = tau_pi_half(&config);
            let state = evolve(&config, tau).unwrap();
            assert_abs_diff_eq!(state.w_fidelity(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn tau_values() {
        use std::f64::consts::PI;
        assert_abs_diff_eq!(tau_pi_half(&cfg(1, 1.0)), PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(tau_pi_half(&cfg(3, 1.0)), PI / (2.0 * 3f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(tau_pi_half(&cfg(9, 0.5)), PI / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn closed_form_matches_matrix_exponential() {
        for n in [1, 2, 4, 9, 16] {
            let config = cfg(n, 0.7);
            for i in 0..100 {
                let t = i as f64 * 0.05;
                let a = evolve(&config, t).unwrap();
                let b = evolve_matrix_exponential(&config, t).unwrap();
                for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                    assert!((x - y).norm() < 1e-10, "n={n} t={t}");
                }
            }
        }
    }

    #[test]
    fn fidelity_is_rabi_sine() {
        // fidelity(t) = sin²(g√N t); N=4, g=1, t=0.3 → sin²(0.6)
        let config = cfg(4, 1.0);
        let state = evolve(&config, 0.3).unwrap();
        assert_abs_diff_eq!(state.w_fidelity(), 0.6f64.sin().powi(2), epsilon = 1e-12);
    }

    #[test]
    fn curve_endpoints_and_period() {
        let n = 5;
        let g = 1.0;
        let config = PreparationConfig::new(n, g, 2.0, 2).unwrap();
        let tau = tau_pi_half(&config);
        let at = |t: f64| evolve(&config, t).unwrap().w_fidelity();
        assert_abs_diff_eq!(at(0.0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(at(tau), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(at(2.0 * tau), 0.0, epsilon = 1e-9);
        // matrix-exponential cross-check of the full-period return
        let back = evolve_matrix_exponential(&config, 2.0 * tau).unwrap();
        assert_abs_diff_eq!(back.w_fidelity(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn norm_conserved() {
        let config = cfg(6, 0.9);
        for point in fidelity_curve(&config).unwrap() {
            let state = evolve(&config, point.time).unwrap();
            assert_abs_diff_eq!(state.norm(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn config_validation() {
        assert_eq!(
            PreparationConfig::new(0, 1.0, 1.0, 10).unwrap_err(),
            PreparationError::ZeroTargets
        );
        assert!(matches!(
            PreparationConfig::new(3, 0.0, 1.0, 10).unwrap_err(),
            PreparationError::NonPositiveCoupling(_)
        ));
        assert_eq!(
            PreparationConfig::new(3, 1.0, 1.0, 1).unwrap_err(),
            PreparationError::TooFewSamples(1)
        );
        assert!(matches!(
            evolve(&cfg(3, 1.0), -0.1).unwrap_err(),
            PreparationError::NegativeTime(_)
        ));
    }
}
