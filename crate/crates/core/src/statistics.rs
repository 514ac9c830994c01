//! Outcome statistics of the `σx`/`σz` measurement.
//!
//! Two-outcome vectors are ordered `(+1, −1)`. The four-outcome joint vector
//! uses the canonical order `(j,k) = (+,+), (+,−), (−,+), (−,−)` and so does
//! every product of two-outcome vectors built here.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bloch::BlochState;
use crate::error::{domain, Error, Result};

/// Negative components down to this value are rounding noise and get clamped to zero.
pub const NEGATIVE_CLAMP: f64 = 1e-15;
/// Allowed deviation of the component sum from one.
pub const SUM_TOL: f64 = 1e-12;

/// A finite probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVec(Vec<f64>);

impl ProbVec {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDistribution("empty vector".into()));
        }
        let mut values = values;
        for (i, v) in values.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidDistribution(format!("component {i} is not finite")));
            }
            if *v < 0.0 {
                if *v < -NEGATIVE_CLAMP {
                    return Err(Error::InvalidDistribution(format!("component {i} = {v} is negative")));
                }
                *v = 0.0;
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("components sum to {sum}, not 1")));
        }
        Ok(Self(values))
    }

    /// Uniform distribution over `n` outcomes.
    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Components in non-increasing order.
    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    // Formula outputs are nonnegative and normalized up to rounding.
    pub(crate) fn from_formula(values: Vec<f64>) -> Self {
        Self(values.into_iter().map(|v| v.max(0.0)).collect())
    }
}

impl AsRef<[f64]> for ProbVec {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Apparatus overlap angle: `cos δ = ⟨a₊|a₋⟩`, `δ ∈ [0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementConfig {
    delta: f64,
}

impl MeasurementConfig {
    pub fn new(delta: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&delta) {
            return domain(format!("delta = {delta} outside [0, π/2]"));
        }
        Ok(Self { delta })
    }

    /// `δ = π/4`, noise split equally between the observables.
    pub const fn balanced() -> Self {
        Self { delta: FRAC_PI_4 }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Noise factor `η = cos δ` applied to the `σx` readout.
    pub fn eta_x(&self) -> f64 {
        self.delta.cos()
    }

    /// Noise factor `η = sin δ` applied to the `σz` readout.
    pub fn eta_z(&self) -> f64 {
        self.delta.sin()
    }
}

impl Default for MeasurementConfig {
    fn default() -> Self {
        Self::balanced()
    }
}

/// Joint distribution of the outcomes `j` (σx) and `k` (σz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointStats {
    /// Indexed `[j][k]` with index 0 for `+1` and 1 for `−1`.
    pub p: [[f64; 2]; 2],
}

impl JointStats {
    /// Probability of the outcome pair, with `j, k ∈ {+1, −1}`.
    pub fn get(&self, j: i8, k: i8) -> f64 {
        self.p[sign_index(j)][sign_index(k)]
    }

    /// Flattened in the canonical order.
    pub fn as_array(&self) -> [f64; 4] {
        [self.p[0][0], self.p[0][1], self.p[1][0], self.p[1][1]]
    }

    pub fn to_prob_vec(&self) -> ProbVec {
        ProbVec::from_formula(self.as_array().to_vec())
    }

    /// Sum over `k`: the distribution of `j`.
    pub fn marginal_x(&self) -> [f64; 2] {
        [self.p[0][0] + self.p[0][1], self.p[1][0] + self.p[1][1]]
    }

    /// Sum over `j`: the distribution of `k`.
    pub fn marginal_z(&self) -> [f64; 2] {
        [self.p[0][0] + self.p[1][0], self.p[0][1] + self.p[1][1]]
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &JointStats) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn sign_index(s: i8) -> usize {
    match s {
        1 => 0,
        -1 => 1,
        _ => panic!("outcome label must be +1 or -1, got {s}"),
    }
}

const SIGNS: [f64; 2] = [1.0, -1.0];

/// Exact statistics of `σx` and `σz` measured alone.
pub fn intrinsic_stats(state: &BlochState) -> (ProbVec, ProbVec) {
    (two_outcome(state.sx()), two_outcome(state.sz()))
}

/// `p̃_{jk} = ¼(1 + j s_x cos δ + k s_z sin δ)`.
pub fn joint_stats(state: &BlochState, cfg: &MeasurementConfig) -> JointStats {
    let x = state.sx() * cfg.eta_x();
    let z = state.sz() * cfg.eta_z();
    let mut p = [[0.0; 2]; 2];
    for (row, j) in p.iter_mut().zip(SIGNS) {
        for (cell, k) in row.iter_mut().zip(SIGNS) {
            *cell = (0.25 * (1.0 + j * x + k * z)).max(0.0);
        }
    }
    JointStats { p }
}

/// Noisy marginals `½(1 + j s_x cos δ)` and `½(1 + k s_z sin δ)`.
pub fn marginal_stats(state: &BlochState, cfg: &MeasurementConfig) -> (ProbVec, ProbVec) {
    (
        two_outcome(state.sx() * cfg.eta_x()),
        two_outcome(state.sz() * cfg.eta_z()),
    )
}

fn two_outcome(mean: f64) -> ProbVec {
    ProbVec::from_formula(vec![0.5 * (1.0 + mean), 0.5 * (1.0 - mean)])
}

/// Distribution of independent outcomes: all products `p_i q_j`, `i` major.
pub fn product_distribution(p: &ProbVec, q: &ProbVec) -> ProbVec {
    let values = p
        .values()
        .iter()
        .flat_map(|a| q.values().iter().map(move |b| a * b))
        .collect();
    ProbVec(values)
}

/// The three four-outcome descriptions compared throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatKind {
    /// Joint statistics of the simultaneous measurement.
    Joint,
    /// Product of the two noisy marginals.
    MarginalProduct,
    /// Product of the two intrinsic distributions.
    IntrinsicProduct,
}

impl StatKind {
    pub const ALL: [StatKind; 3] = [StatKind::Joint, StatKind::MarginalProduct, StatKind::IntrinsicProduct];

    pub fn name(&self) -> &'static str {
        match self {
            StatKind::Joint => "joint",
            StatKind::MarginalProduct => "marginal-product",
            StatKind::IntrinsicProduct => "intrinsic-product",
        }
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StatKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown statistics kind `{s}`")))
    }
}

/// Four-outcome statistics of the requested kind, in canonical order.
pub fn stats_of_kind(kind: StatKind, state: &BlochState, cfg: &MeasurementConfig) -> ProbVec {
    match kind {
        StatKind::Joint => joint_stats(state, cfg).to_prob_vec(),
        StatKind::MarginalProduct => {
            let (px, pz) = marginal_stats(state, cfg);
            product_distribution(&px, &pz)
        }
        StatKind::IntrinsicProduct => {
            let (px, pz) = intrinsic_stats(state);
            product_distribution(&px, &pz)
        }
    }
}

/// Draws `n` i.i.d. outcome pairs from [`joint_stats`] and returns the counts
/// in canonical order.
///
/// The generator is ChaCha8 (`rand_chacha` 0.3) seeded with
/// `seed_from_u64(seed)`; each draw takes one uniform `f64` from `rand` 0.8's
/// standard distribution and inverts the cumulative distribution over the
/// canonical order. The stream is value-stable across platforms.
pub fn sample_joint(state: &BlochState, cfg: &MeasurementConfig, n: u64, seed: u64) -> Result<[u64; 4]> {
    if n == 0 {
        return domain("sample count must be at least 1");
    }
    let probs = joint_stats(state, cfg).as_array();
    let mut cdf = [0.0; 4];
    let mut acc = 0.0;
    for (c, p) in cdf.iter_mut().zip(probs) {
        acc += p;
        *c = acc;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; 4];
    for _ in 0..n {
        let u: f64 = rng.gen();
        // Falls through to the last outcome when rounding leaves cdf[3] < 1.
        let idx = cdf.iter().position(|&c| u < c).unwrap_or(3);
        counts[idx] += 1;
    }
    Ok(counts)
}

/// Total-variation distance between empirical counts and a distribution.
pub fn total_variation(counts: &[u64], probs: &[f64]) -> f64 {
    let n: u64 = counts.iter().sum();
    0.5 * counts
        .iter()
        .zip(probs)
        .map(|(&c, p)| (c as f64 / n as f64 - p).abs())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn approx(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn st(x: f64, y: f64, z: f64) -> BlochState {
        BlochState::new(x, y, z).unwrap()
    }

    #[test]
    fn probvec_validation() {
        assert!(ProbVec::new(vec![0.5, 0.5]).is_ok());
        assert_eq!(ProbVec::new(vec![1.0 + 1e-16, -1e-16]).unwrap().values()[1], 0.0);
        assert!(ProbVec::new(vec![1.1, -0.1]).is_err());
        assert!(ProbVec::new(vec![0.5, 0.4]).is_err());
        assert!(ProbVec::new(vec![]).is_err());
        assert!(ProbVec::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn intrinsic_examples() {
        let (px, pz) = intrinsic_stats(&st(0.0, 0.0, 1.0));
        assert_eq!(px.values(), &[0.5, 0.5]);
        assert_eq!(pz.values(), &[1.0, 0.0]);

        let (px, pz) = intrinsic_stats(&st(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2));
        let want = [(1.0 + FRAC_1_SQRT_2) / 2.0, (1.0 - FRAC_1_SQRT_2) / 2.0];
        assert!(approx(px.values(), &want, 1e-15));
        assert!(approx(pz.values(), &want, 1e-15));

        let (px, pz) = intrinsic_stats(&BlochState::mixed());
        assert_eq!((px.values(), pz.values()), (&[0.5, 0.5][..], &[0.5, 0.5][..]));
    }

    #[test]
    fn joint_examples() {
        let cfg = MeasurementConfig::balanced();
        let p = joint_stats(&st(0.0, 0.0, 1.0), &cfg).as_array();
        let hi = (1.0 + FRAC_1_SQRT_2) / 4.0;
        let lo = (1.0 - FRAC_1_SQRT_2) / 4.0;
        assert!(approx(&p, &[hi, lo, hi, lo], 1e-15));

        let p = joint_stats(&st(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2), &cfg).to_prob_vec();
        assert!(approx(&p.sorted_desc(), &[0.5, 0.25, 0.25, 0.0], 1e-15));

        let cfg0 = MeasurementConfig::new(0.0).unwrap();
        let s = st(0.3, 0.1, -0.8);
        let j = joint_stats(&s, &cfg0);
        for js in [1i8, -1] {
            let want = 0.25 * (1.0 + f64::from(js) * 0.3);
            assert!((j.get(js, 1) - want).abs() < 1e-16);
            assert!((j.get(js, -1) - want).abs() < 1e-16);
        }
    }

    #[test]
    fn marginal_examples() {
        let (_, pz) = marginal_stats(&st(0.0, 0.0, 1.0), &MeasurementConfig::new(FRAC_PI_2).unwrap());
        assert!(approx(pz.values(), &[1.0, 0.0], 1e-16));
        let (px, _) = marginal_stats(&st(1.0, 0.0, 0.0), &MeasurementConfig::balanced());
        let want = [(1.0 + FRAC_1_SQRT_2) / 2.0, (1.0 - FRAC_1_SQRT_2) / 2.0];
        assert!(approx(px.values(), &want, 1e-15));
        for d in [0.0, 0.4, FRAC_PI_2] {
            let (px, pz) = marginal_stats(&BlochState::mixed(), &MeasurementConfig::new(d).unwrap());
            assert_eq!((px.values(), pz.values()), (&[0.5, 0.5][..], &[0.5, 0.5][..]));
        }
    }

    #[test]
    fn product_examples() {
        let a = ProbVec::new(vec![1.0, 0.0]).unwrap();
        let h = ProbVec::uniform(2);
        assert_eq!(product_distribution(&a, &h).values(), &[0.5, 0.5, 0.0, 0.0]);
        assert_eq!(product_distribution(&h, &h).values(), &[0.25; 4]);

        let (px, pz) = intrinsic_stats(&st(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2));
        let mu = product_distribution(&px, &pz).sorted_desc();
        let c = FRAC_1_SQRT_2;
        let want = [(1.0 + c).powi(2) / 4.0, 0.125, 0.125, (1.0 - c).powi(2) / 4.0];
        assert!(approx(&mu, &want, 1e-15));
    }

    #[test]
    fn config_range() {
        assert!(MeasurementConfig::new(-1e-9).is_err());
        assert!(MeasurementConfig::new(FRAC_PI_2 + 1e-9).is_err());
        assert_eq!(MeasurementConfig::default().delta(), FRAC_PI_4);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in StatKind::ALL {
            assert_eq!(k.name().parse::<StatKind>().unwrap(), k);
        }
        assert!("nope".parse::<StatKind>().is_err());
    }

    #[test]
    fn sampler_edge_cases() {
        let cfg = MeasurementConfig::balanced();
        assert!(sample_joint(&BlochState::mixed(), &cfg, 0, 1).is_err());
        let one = sample_joint(&BlochState::mixed(), &cfg, 1, 7).unwrap();
        assert_eq!(one.iter().sum::<u64>(), 1);
        assert_eq!(one.iter().filter(|&&c| c == 1).count(), 1);

        let cfg0 = MeasurementConfig::new(0.0).unwrap();
        let counts = sample_joint(&st(1.0, 0.0, 0.0), &cfg0, 10_000, 3).unwrap();
        assert_eq!(counts[2] + counts[3], 0);
    }

    #[test]
    fn sampler_is_deterministic() {
        let s = st(0.2, -0.4, 0.7);
        let cfg = MeasurementConfig::new(0.3).unwrap();
        let a = sample_joint(&s, &cfg, 5000, 42).unwrap();
        let b = sample_joint(&s, &cfg, 5000, 42).unwrap();
        let c = sample_joint(&s, &cfg, 5000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn state() -> impl Strategy<Value = BlochState> {
            (
                0.0..=1.0f64,
                0.0..=std::f64::consts::PI,
                0.0..(2.0 * std::f64::consts::PI),
            )
                .prop_map(|(r, t, f)| {
                    BlochState::new(r * t.sin() * f.cos(), r * t.sin() * f.sin(), r * t.cos()).unwrap()
                })
        }

        fn probvec(n: usize) -> impl Strategy<Value = ProbVec> {
            prop::collection::vec(0.0..1.0f64, n).prop_map(|w| {
                let s: f64 = w.iter().sum::<f64>() + 1e-9;
                let mut v: Vec<f64> = w.iter().map(|x| (x + 1e-9 / w.len() as f64) / s).collect();
                let err = 1.0 - v.iter().sum::<f64>();
                v[0] += err;
                ProbVec::new(v).unwrap()
            })
        }

        proptest! {
            #[test]
            fn marginalization_consistency(s in state(), d in 0.0..=FRAC_PI_2) {
                let cfg = MeasurementConfig::new(d).unwrap();
                let j = joint_stats(&s, &cfg);
                let (mx, mz) = marginal_stats(&s, &cfg);
                prop_assert!(approx(&j.marginal_x(), mx.values(), 1e-14));
                prop_assert!(approx(&j.marginal_z(), mz.values(), 1e-14));
            }

            #[test]
            fn delta_endpoints_are_exact(s in state()) {
                let (ix, iz) = intrinsic_stats(&s);
                let (mx, _) = marginal_stats(&s, &MeasurementConfig::new(0.0).unwrap());
                let (_, mz) = marginal_stats(&s, &MeasurementConfig::new(FRAC_PI_2).unwrap());
                prop_assert!(approx(mx.values(), ix.values(), 1e-14));
                prop_assert!(approx(mz.values(), iz.values(), 1e-14));
            }

            #[test]
            fn product_associative(p in probvec(2), q in probvec(3), r in probvec(2)) {
                let left = product_distribution(&product_distribution(&p, &q), &r);
                let right = product_distribution(&p, &product_distribution(&q, &r));
                prop_assert!(approx(&left.sorted_desc(), &right.sorted_desc(), 1e-15));
                prop_assert!((left.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }
}
