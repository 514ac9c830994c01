//! Path distinguishability, fringe visibility and predictability.
//!
//! The eigenstates `|±⟩` of `σz` play the two interferometer paths, the
//! apparatus states `|a±⟩` mark the path. For a pure system state at polar
//! angle `θ`, the path weights are `w₊ = cos²(θ/2)` and `w₋ = 1 − w₊`, and with
//! `|⟨a₊|a₋⟩| = cos δ`:
//!
//! * `D = √(1 − 4 w₊ w₋ cos²δ)`
//! * `V = 2 √(w₊ w₋) cos δ`
//! * `P = |w₊ − w₋|`
//!
//! so that `D² + V² = 1` for every pure state.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::optimize::bisect;
use crate::statistics::MeasurementConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityReport {
    pub distinguishability: f64,
    pub visibility: f64,
    pub predictability: f64,
    /// `D² + V²`.
    pub sum_sq: f64,
}

fn path_weights(theta: f64) -> (f64, f64) {
    let w_plus = (0.5 * theta).cos().powi(2);
    (w_plus, 1.0 - w_plus)
}

/// Duality quantities for the pure state at polar angle `theta`.
pub fn duality_report(theta: f64, cfg: &MeasurementConfig) -> DualityReport {
    let (wp, wm) = path_weights(theta);
    let overlap = cfg.delta().cos();
    let product = wp * wm;
    let d = (1.0 - 4.0 * product * overlap * overlap).max(0.0).sqrt();
    let v = 2.0 * product.sqrt() * overlap;
    DualityReport {
        distinguishability: d,
        visibility: v,
        predictability: (wp - wm).abs(),
        sum_sq: d * d + v * v,
    }
}

/// Tolerance on `w₊w₋cos²δ − 1/8` for declaring a tangent solution.
const TANGENT_TOL: f64 = 1e-12;
const LOCUS_TOL: f64 = 1e-12;

/// All `θ ∈ [0, π]` with `D = V`, i.e. `w₊ w₋ cos²δ = 1/8`.
///
/// The left side peaks at `θ = π/2` with value `cos²δ / 4`; when that peak
/// equals `1/8` (balanced detection) the single solution is `π/2`.
pub fn dv_equal_locus(cfg: &MeasurementConfig) -> Vec<f64> {
    let c2 = cfg.delta().cos().powi(2);
    let g = |theta: f64| {
        let (wp, wm) = path_weights(theta);
        wp * wm * c2 - 0.125
    };
    let peak = g(FRAC_PI_2);
    if peak.abs() <= TANGENT_TOL {
        return vec![FRAC_PI_2];
    }
    if peak < 0.0 {
        return Vec::new();
    }
    [(0.0, FRAC_PI_2), (FRAC_PI_2, PI)]
        .into_iter()
        .filter_map(|(lo, hi)| bisect(g, lo, hi, LOCUS_TOL))
        .collect()
}
