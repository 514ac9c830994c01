//! Majorization order on probability vectors and majorization uncertainty
//! bounds.
//!
//! `p ≺ q` ("p is majorized by q") when, with both sorted in non-increasing
//! order, every prefix sum of `p` is at most the matching prefix sum of `q`.
//! Rényi entropies are Schur-concave: `p ≺ q` implies `R_α(p) ≥ R_α(q)`.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2, TAU};
use std::fmt;

use crate::bloch::{family_state, BlochState, StateFamily};
use crate::error::{domain, Error, Result};
use crate::optimize::{bisect, maximize_2d};
use crate::statistics::{stats_of_kind, MeasurementConfig, ProbVec, StatKind};

/// Default tolerance on prefix-sum comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Same sorted vectors within tolerance.
    Equal,
    /// The first argument majorizes the second (`q ≺ p`).
    Majorizes,
    /// The first argument is majorized by the second (`p ≺ q`).
    MajorizedBy,
    /// Neither majorizes the other.
    Incomparable,
}

impl Verdict {
    /// The verdict with the arguments swapped.
    pub fn flip(self) -> Self {
        match self {
            Verdict::Majorizes => Verdict::MajorizedBy,
            Verdict::MajorizedBy => Verdict::Majorizes,
            v => v,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Equal => "Equal",
            Verdict::Majorizes => "Majorizes",
            Verdict::MajorizedBy => "MajorizedBy",
            Verdict::Incomparable => "Incomparable",
        };
        f.write_str(s)
    }
}

/// Outcome of [`compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MajorizationRelation {
    pub verdict: Verdict,
    /// For incomparable vectors, 1-based prefix lengths `(k₁, k₂)`: at `k₁`
    /// the second vector's prefix sum is larger (so the first does not
    /// majorize it), at `k₂` the first vector's prefix sum is larger.
    pub witness: Option<(usize, usize)>,
}

/// Prefix sums of the descending rearrangement, zero-padded to `len`.
pub fn sorted_prefix_sums(p: &[f64], len: usize) -> Vec<f64> {
    let mut v = p.to_vec();
    v.resize(len.max(p.len()), 0.0);
    v.sort_by(|a, b| b.total_cmp(a));
    v.iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Compares two distributions in the majorization order; shorter vectors are
/// padded with zeros. Prefix sums within `tol` of each other count as equal.
pub fn compare(p: &ProbVec, q: &ProbVec, tol: f64) -> MajorizationRelation {
    compare_slices(p.values(), q.values(), tol)
}

pub fn compare_slices(p: &[f64], q: &[f64], tol: f64) -> MajorizationRelation {
    let n = p.len().max(q.len());
    let ps = sorted_prefix_sums(p, n);
    let qs = sorted_prefix_sums(q, n);
    let q_exceeds = ps.iter().zip(&qs).position(|(a, b)| *b > *a + tol);
    let p_exceeds = ps.iter().zip(&qs).position(|(a, b)| *a > *b + tol);
    match (q_exceeds, p_exceeds) {
        (None, None) => MajorizationRelation {
            verdict: Verdict::Equal,
            witness: None,
        },
        (None, Some(_)) => MajorizationRelation {
            verdict: Verdict::Majorizes,
            witness: None,
        },
        (Some(_), None) => MajorizationRelation {
            verdict: Verdict::MajorizedBy,
            witness: None,
        },
        (Some(k1), Some(k2)) => MajorizationRelation {
            verdict: Verdict::Incomparable,
            witness: Some((k1 + 1, k2 + 1)),
        },
    }
}

/// Applies the doubly stochastic map `[[1+η, 1−η], [1−η, 1+η]] / 2`.
pub fn apply_noise(p: &ProbVec, eta: f64) -> Result<ProbVec> {
    if p.len() != 2 {
        return domain(format!("noise map acts on two-outcome vectors, got {}", p.len()));
    }
    if !(0.0..=1.0).contains(&eta) {
        return domain(format!("eta = {eta} outside [0, 1]"));
    }
    let [a, b] = [p.values()[0], p.values()[1]];
    let (d, o) = ((1.0 + eta) / 2.0, (1.0 - eta) / 2.0);
    Ok(ProbVec::from_formula(vec![d * a + o * b, o * a + d * b]))
}

/// Sorted statistics of the extreme state `ExtremeZ(+)` and the intermediate
/// state `Intermediate(+, +)` at purity `smag`: the pairs `(λ̃, μ̃)`, `(λ̃′, μ̃′)`
/// and `(λ, μ)` for the three kinds.
pub fn extreme_and_intermediate(kind: StatKind, cfg: &MeasurementConfig, smag: f64) -> Result<(ProbVec, ProbVec)> {
    let ext = family_state(StateFamily::extreme_z(1, smag)?);
    let int = family_state(StateFamily::intermediate(1, 1, smag)?);
    let sorted = |s: &BlochState| ProbVec::from_formula(stats_of_kind(kind, s, cfg).sorted_desc());
    Ok((sorted(&ext), sorted(&int)))
}

fn third_prefix_gap(smag: f64) -> f64 {
    let cfg = MeasurementConfig::balanced();
    let (_, joint) = extreme_and_intermediate(StatKind::Joint, &cfg, smag).expect("smag in range");
    let (_, intrinsic) = extreme_and_intermediate(StatKind::IntrinsicProduct, &cfg, smag).expect("smag in range");
    sorted_prefix_sums(joint.values(), 4)[2] - sorted_prefix_sums(intrinsic.values(), 4)[2]
}

/// Purity `|s|` at which, for intermediate states under balanced detection,
/// the third prefix sums of the sorted joint statistics and of the sorted
/// intrinsic product cross. Below it the joint statistics are majorized by
/// the intrinsic product; above it the two are incomparable.
pub fn purity_threshold_joint_vs_intrinsic() -> f64 {
    bisect(third_prefix_gap, 0.05, 1.0, 1e-13).expect("prefix sums cross inside (0.05, 1)")
}

/// Closed-form bound vectors at `δ = π/4` (the intrinsic one does not depend on `δ`).
pub fn closed_form_bound(kind: StatKind) -> [f64; 4] {
    match kind {
        StatKind::Joint => [0.5, SQRT_2 / 4.0, (2.0 - SQRT_2) / 4.0, 0.0],
        StatKind::MarginalProduct => {
            let d = 16.0 * SQRT_2;
            [
                9.0 * SQRT_2 / d,
                (8.0 - SQRT_2) / d,
                (7.0 * SQRT_2 - 8.0) / d,
                SQRT_2 / d,
            ]
        }
        StatKind::IntrinsicProduct => [(3.0 + 2.0 * SQRT_2) / 8.0, (5.0 - 2.0 * SQRT_2) / 8.0, 0.0, 0.0],
    }
}

/// Grid used by the bound searches, `(θ points, |s| points)`.
pub const BOUND_GRID: (usize, usize) = (513, 129);
const BOUND_REFINE_TOL: f64 = 1e-10;
const DESCENDING_TOL: f64 = 1e-9;

fn state_at(theta: f64, r: f64) -> BlochState {
    BlochState::xz(r.clamp(0.0, 1.0), theta).expect("radius clamped to [0, 1]")
}

/// Largest sum of `k` components of the kind's statistics over the Bloch
/// ball, with the maximizing `(θ, |s|)`.
pub fn prefix_supremum(kind: StatKind, cfg: &MeasurementConfig, k: usize) -> ((f64, f64), f64) {
    maximize_2d(
        |theta, r| {
            let sorted = stats_of_kind(kind, &state_at(theta, r), cfg).sorted_desc();
            sorted[..k].iter().sum()
        },
        (0.0, TAU),
        (0.0, 1.0),
        BOUND_GRID,
        BOUND_REFINE_TOL,
    )
}

/// Constant vector `ω` with `p ≺ ω` for every state's statistics of this
/// kind, built from the suprema `s_k` of the prefix sums:
/// `ω = (s₁, s₂ − s₁, s₃ − s₂, 1 − s₃)`.
///
/// The statistics do not involve `s_y`, so the search covers the unit disk
/// of the XZ plane.
pub fn compute_bound_vector(kind: StatKind, cfg: &MeasurementConfig) -> Result<ProbVec> {
    let mut sups = [0.0; 3];
    for (k, s) in sups.iter_mut().enumerate() {
        *s = prefix_supremum(kind, cfg, k + 1).1.min(1.0);
    }
    let omega = vec![sups[0], sups[1] - sups[0], sups[2] - sups[1], 1.0 - sups[2]];
    if omega.windows(2).any(|w| w[1] > w[0] + DESCENDING_TOL) || omega.iter().any(|&w| w < -DESCENDING_TOL) {
        return Err(Error::Consistency(format!(
            "bound vector {omega:?} is not non-increasing"
        )));
    }
    ProbVec::new(omega.into_iter().map(|w| w.max(0.0)).collect())
}

/// Smallest max-norm distance between a state's sorted statistics and the
/// bound vector, with the closest `(θ, |s|)`. Zero would mean the bound is
/// attained.
pub fn attainability_gap(kind: StatKind, cfg: &MeasurementConfig, bound: &ProbVec) -> ((f64, f64), f64) {
    let target = bound.sorted_desc();
    let ((theta, r), neg) = maximize_2d(
        |theta, r| {
            let sorted = stats_of_kind(kind, &state_at(theta, r), cfg).sorted_desc();
            -sorted
                .iter()
                .zip(&target)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        },
        (0.0, TAU),
        (0.0, 1.0),
        BOUND_GRID,
        BOUND_REFINE_TOL,
    );
    ((theta, r), -neg)
}

/// Sorted statistics of the state `s_x = s_z = 1/√2`, where the zero or
/// extremal components of the balanced bounds would force any attaining
/// state to sit.
pub fn forced_state_statistics(kind: StatKind, cfg: &MeasurementConfig) -> Vec<f64> {
    let s = BlochState::new(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2).expect("pure state");
    stats_of_kind(kind, &s, cfg).sorted_desc()
}

/// Named vectors accepted by the command line, all sorted in non-increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedVector {
    LambdaTilde,
    MuTilde,
    LambdaTildePrime,
    MuTildePrime,
    Lambda,
    Mu,
    OmegaTilde,
    OmegaTildePrime,
    Omega,
}

impl NamedVector {
    pub const ALL: [NamedVector; 9] = [
        NamedVector::LambdaTilde,
        NamedVector::MuTilde,
        NamedVector::LambdaTildePrime,
        NamedVector::MuTildePrime,
        NamedVector::Lambda,
        NamedVector::Mu,
        NamedVector::OmegaTilde,
        NamedVector::OmegaTildePrime,
        NamedVector::Omega,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            NamedVector::LambdaTilde => "lambda-tilde",
            NamedVector::MuTilde => "mu-tilde",
            NamedVector::LambdaTildePrime => "lambda-tilde-prime",
            NamedVector::MuTildePrime => "mu-tilde-prime",
            NamedVector::Lambda => "lambda",
            NamedVector::Mu => "mu",
            NamedVector::OmegaTilde => "omega-tilde",
            NamedVector::OmegaTildePrime => "omega-tilde-prime",
            NamedVector::Omega => "omega",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == s)
    }

    /// Evaluates the vector. The `λ`/`μ` families use `smag` and `cfg`; the
    /// `ω` bounds are computed numerically for `cfg`.
    pub fn evaluate(&self, cfg: &MeasurementConfig, smag: f64) -> Result<ProbVec> {
        use NamedVector::*;
        let pair = |kind| extreme_and_intermediate(kind, cfg, smag);
        Ok(match self {
            LambdaTilde => pair(StatKind::Joint)?.0,
            MuTilde => pair(StatKind::Joint)?.1,
            LambdaTildePrime => pair(StatKind::MarginalProduct)?.0,
            MuTildePrime => pair(StatKind::MarginalProduct)?.1,
            Lambda => pair(StatKind::IntrinsicProduct)?.0,
            Mu => pair(StatKind::IntrinsicProduct)?.1,
            OmegaTilde => compute_bound_vector(StatKind::Joint, cfg)?,
            OmegaTildePrime => compute_bound_vector(StatKind::MarginalProduct, cfg)?,
            Omega => compute_bound_vector(StatKind::IntrinsicProduct, cfg)?,
        })
    }
}
