//! Exact and simulated probabilities for the pick-up sticks problem.
//!
//! Draw `n` stick lengths independently and uniformly from `[0, 1]`. What is
//! the probability that no `k` of them can be arranged into a `k`-gon? For
//! triangles the answer is the reciprocal of the Fibonorial; for
//! quadrilaterals it involves the Tribonacci numbers and a correction factor.
//! For general `k` this crate computes the value exactly with two independent
//! engines and estimates it by reproducible Monte Carlo simulation.
//!
//! - [`sequences`]: k-step Fibonacci-type sequences and the closed forms.
//! - [`engine`]: successive exponential integrations tracked as exact
//!   integer coefficient updates.
//! - [`oracle`]: exact simplex volume after a unit-triangular change of
//!   variables, plus a deterministic midpoint-grid check for tiny `n`.
//! - [`montecarlo`]: seeded, scheduling-invariant simulation and the
//!   exponential-spacings sampler.

pub mod engine;
pub mod error;
pub mod montecarlo;
pub mod oracle;
pub mod ratio;
pub mod sequences;
pub mod stats;

pub use engine::{coefficient_trace, init_state, probability, CoeffState, KGonQuery};
pub use error::{Error, Result};
pub use montecarlo::{
    can_form_ngon, estimate, estimate_ngon_formable, no_kgon_indicator, spacings_equivalence_batch,
    spacings_equivalence_sample, Estimate, SpacingsSample, StickSample, TrialConfig,
};
pub use oracle::{grid_volume_estimate, probability_oracle, substitution_coefficients, SubstitutionCoeffs};
pub use ratio::{ExactInteger, ExactRatio};
pub use sequences::{fibonorial, kbonacci, p_cannot_ngon, p_no_quadrilateral, p_no_triangle, SequenceSpec};
