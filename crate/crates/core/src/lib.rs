//! Uncertainty of a noisy simultaneous measurement of `σx` and `σz` on a qubit.
//!
//! A qubit in state `ρ = ½(I + s·σ)` is coupled to a two-level apparatus so that
//! `σz` can be read out from the apparatus while `σx` is measured on the system
//! itself. The apparatus overlap `cos δ = ⟨a₊|a₋⟩` trades noise between the two
//! observables. This crate computes
//!
//! * the intrinsic, joint and marginal outcome statistics ([`statistics`]),
//!   cross-checked against a first-principles tensor-product model ([`hilbert`]);
//! * Rényi and Tsallis entropies, normalized entropy scans and the critical
//!   entropic indices at which extreme and intermediate states swap roles
//!   ([`entropy`]);
//! * the majorization order, the constant majorizing bound vectors and their
//!   non-attainability ([`majorization`]);
//! * distinguishability, visibility and predictability ([`duality`]).
//!
//! ```
//! use jointur::bloch::{family_state, StateFamily};
//! use jointur::entropy::{renyi, EntropyIndex};
//! use jointur::statistics::{joint_stats, MeasurementConfig};
//!
//! let state = family_state(StateFamily::intermediate(1, 1, 1.0).unwrap());
//! let p = joint_stats(&state, &MeasurementConfig::balanced());
//! let h2 = renyi(&p.to_prob_vec(), EntropyIndex::new(2.0).unwrap());
//! assert!((h2 - (8.0f64 / 3.0).ln()).abs() < 1e-12);
//! ```

pub mod bloch;
pub mod duality;
pub mod entropy;
mod error;
pub mod hilbert;
pub mod majorization;
pub mod optimize;
pub mod statistics;

pub use error::{Error, Result};
