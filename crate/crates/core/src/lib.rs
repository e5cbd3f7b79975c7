//! Numerical toolkit for the inequality-free refutation of local realism
//! with single-quanta (W) states.
//!
//! The library computes exact quantum predictions for mixed Z/X-basis
//! measurements on W, GHZ, and Bell states, enumerates local-hidden-variable
//! ensembles under the element-of-reality constraint rules, and exhibits
//! outcomes that local realism predicts with positive probability while
//! quantum mechanics forbids them exactly. Supporting modules cover the
//! Rabi-oscillation preparation protocol and the Bell–Mermin single-qubit
//! hidden-variable model.

pub mod bellmermin;
pub mod contradiction;
pub mod lhv;
pub mod preparation;
pub mod statevector;

pub use contradiction::{
    all_equal_x_probability, counterfactual_completion, forbidden_witnesses, interference_trace,
    quantum_wins_scan, ContradictionReport, Fraction, StateFamily, Verdict, Witness,
};
pub use lhv::{
    enumerate_all, lhv_outcome_probability, pipeline, quantum_weight_accounting,
    rule_forbidden_patterns, rule_single_excitation, Ensemble, LhvAssignment, PipelineCounts,
};
pub use preparation::{evolve, fidelity_curve, tau_pi_half, PreparationConfig};
pub use statevector::{
    exact_zero_test, ghz_state, w_state, Basis, MeasurementSettings, Outcome, Sign, SiteResult,
    Statevector, ZeroVerdict,
};
