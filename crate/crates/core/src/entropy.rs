//! Rényi and Tsallis entropies and the entropic comparisons built on them.
//!
//! `R_α(p) = ln(Σ p_i^α) / (1 − α)`, with the Shannon entropy at `α = 1`,
//! `ln ‖p‖₀` at `α = 0` and the min-entropy `−ln max p` as `α → ∞`.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, TAU};
use std::fmt;
use std::sync::OnceLock;

use crate::bloch::{family_state, BlochState, FamilyKind, StateFamily};
use crate::error::{domain, Error, Result};
use crate::optimize::{bisect, golden_max, golden_min, periodic_grid};
use crate::statistics::{stats_of_kind, MeasurementConfig, ProbVec, StatKind};

/// Components at or below this are treated as zero when counting the support.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;
/// Indices closer than this to 1 are redirected to [`EntropyIndex::One`].
pub const SHANNON_SNAP: f64 = 1e-9;

/// Entropic index `α ∈ [0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyIndex {
    /// `α ≥ 0` away from 1.
    Finite(f64),
    /// The Shannon limit `α → 1`.
    One,
    /// The min-entropy limit `α → ∞`.
    Infinity,
}

impl EntropyIndex {
    /// Classifies `alpha`, snapping values within [`SHANNON_SNAP`] of 1 to
    /// `One` and `+∞` to `Infinity`.
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.0 {
            return domain(format!("entropic index must be ≥ 0, got {alpha}"));
        }
        Ok(if alpha == f64::INFINITY {
            EntropyIndex::Infinity
        } else if (alpha - 1.0).abs() < SHANNON_SNAP {
            EntropyIndex::One
        } else {
            EntropyIndex::Finite(alpha)
        })
    }

    /// Numeric value of the index (`1` for `One`, `+∞` for `Infinity`).
    pub fn value(&self) -> f64 {
        match *self {
            EntropyIndex::Finite(a) => a,
            EntropyIndex::One => 1.0,
            EntropyIndex::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for EntropyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropyIndex::Finite(a) => write!(f, "{a}"),
            EntropyIndex::One => f.write_str("1"),
            EntropyIndex::Infinity => f.write_str("inf"),
        }
    }
}

fn shannon(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}

/// `ln Σ p_i^α` over the positive components, factoring out the largest one
/// so that large `α` does not underflow.
fn ln_power_sum(p: &[f64], alpha: f64) -> f64 {
    if (alpha - 1.0).abs() < 0.5 {
        // ln(1 + Σ p_i (p_i^{α−1} − 1)) keeps full precision as α → 1.
        let excess: f64 = p
            .iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| x * ((alpha - 1.0) * x.ln()).exp_m1())
            .sum();
        return excess.ln_1p();
    }
    let max = p.iter().copied().fold(0.0, f64::max);
    let scaled: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| (x / max).powf(alpha)).sum();
    alpha * max.ln() + scaled.ln()
}

/// Rényi entropy of order `idx`, in nats.
pub fn renyi(p: &ProbVec, idx: EntropyIndex) -> f64 {
    renyi_slice(p.values(), idx)
}

pub(crate) fn renyi_slice(p: &[f64], idx: EntropyIndex) -> f64 {
    match idx {
        EntropyIndex::One => shannon(p),
        EntropyIndex::Infinity => -p.iter().copied().fold(0.0, f64::max).ln(),
        EntropyIndex::Finite(0.0) => (p.iter().filter(|&&x| x > SUPPORT_THRESHOLD).count() as f64).ln(),
        EntropyIndex::Finite(a) => ln_power_sum(p, a) / (1.0 - a),
    }
}

/// Tsallis entropy `(Σ p_i^α − 1) / (1 − α)`; Shannon at `One`.
pub fn tsallis(p: &ProbVec, idx: EntropyIndex) -> Result<f64> {
    match idx {
        EntropyIndex::One => Ok(shannon(p.values())),
        EntropyIndex::Infinity => Err(Error::UnsupportedIndex(
            "Tsallis entropy is only defined here for finite indices".into(),
        )),
        EntropyIndex::Finite(a) => {
            let sum: f64 = p.values().iter().filter(|&&x| x > 0.0).map(|&x| x.powf(a)).sum();
            Ok((sum - 1.0) / (1.0 - a))
        }
    }
}

/// Tsallis entropy obtained from the Rényi entropy of the same order:
/// `T_α = (exp((1 − α) R_α) − 1) / (1 − α)`.
pub fn tsallis_from_renyi(renyi_value: f64, idx: EntropyIndex) -> Result<f64> {
    match idx {
        EntropyIndex::One => Ok(renyi_value),
        EntropyIndex::Infinity => Err(Error::UnsupportedIndex(
            "Tsallis conversion needs a finite index".into(),
        )),
        EntropyIndex::Finite(a) => Ok(((1.0 - a) * renyi_value).exp_m1() / (1.0 - a)),
    }
}

/// Rényi entropy of the two-outcome distribution `((1 ± 1/√2)/2)`, doubled:
/// the entropy of the intrinsic product for intermediate pure states.
fn intermediate_branch(idx: EntropyIndex) -> f64 {
    let c = FRAC_1_SQRT_2;
    2.0 * renyi_slice(&[(1.0 + c) / 2.0, (1.0 - c) / 2.0], idx)
}

/// Index `α_I` at which `ln 2` and the intermediate branch of the intrinsic
/// bound meet.
pub fn alpha_intrinsic() -> f64 {
    static ALPHA: OnceLock<f64> = OnceLock::new();
    *ALPHA.get_or_init(|| {
        bisect(|a| intermediate_branch(EntropyIndex::Finite(a)) - LN_2, 1.1, 3.0, 1e-14)
            .expect("branches of the intrinsic bound cross in (1.1, 3)")
    })
}

/// Lower bound on `R_α(p^X p^Z)` over all states: `ln 2` up to `α_I`, then
/// `(2/(1−α)) ln[((1+1/√2)/2)^α + ((1−1/√2)/2)^α]`.
pub fn entropic_ur_bound_intrinsic(idx: EntropyIndex) -> f64 {
    if idx.value() <= alpha_intrinsic() {
        LN_2
    } else {
        intermediate_branch(idx)
    }
}

/// Minimum and maximum of `R_α` over the pure-or-mixed circle `|s| = smag`
/// in the XZ plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyRange {
    pub min: f64,
    pub argmin: f64,
    pub max: f64,
    pub argmax: f64,
}

/// Number of θ samples used before local refinement.
pub const THETA_GRID: usize = 4096;
const REFINE_TOL: f64 = 1e-10;

fn entropy_on_circle(
    kind: StatKind,
    idx: EntropyIndex,
    cfg: &MeasurementConfig,
    smag: f64,
) -> Result<impl Fn(f64) -> f64> {
    if !(0.0..=1.0).contains(&smag) {
        return domain(format!("|s| = {smag} outside [0, 1]"));
    }
    let cfg = *cfg;
    Ok(move |theta: f64| {
        let s = BlochState::xz(smag, theta).expect("|s| already validated");
        renyi(&stats_of_kind(kind, &s, &cfg), idx)
    })
}

/// Extremes of the entropy over `θ ∈ [0, 2π)` at fixed `|s|`: a
/// [`THETA_GRID`]-point scan followed by golden-section refinement.
pub fn entropy_range(kind: StatKind, idx: EntropyIndex, cfg: &MeasurementConfig, smag: f64) -> Result<EntropyRange> {
    let f = entropy_on_circle(kind, idx, cfg, smag)?;
    let step = TAU / THETA_GRID as f64;
    let mut lo = (0.0, f64::INFINITY);
    let mut hi = (0.0, f64::NEG_INFINITY);
    for t in periodic_grid(0.0, TAU, THETA_GRID) {
        let v = f(t);
        if v < lo.1 {
            lo = (t, v);
        }
        if v > hi.1 {
            hi = (t, v);
        }
    }
    let (argmin, min) = golden_min(&f, lo.0 - step, lo.0 + step, REFINE_TOL);
    let (argmax, max) = golden_max(&f, hi.0 - step, hi.0 + step, REFINE_TOL);
    Ok(EntropyRange {
        min: min.min(lo.1),
        argmin: if min <= lo.1 { argmin.rem_euclid(TAU) } else { lo.0 },
        max: max.max(hi.1),
        argmax: if max >= hi.1 { argmax.rem_euclid(TAU) } else { hi.0 },
    })
}

/// Smallest entropy spread accepted for normalization.
pub const DEGENERATE_SPREAD: f64 = 1e-12;

/// `(R − R_min) / (R_max − R_min)` at polar angle `theta`, extremes taken over
/// the circle `|s| = smag` in the XZ plane.
pub fn normalized_renyi(
    kind: StatKind,
    idx: EntropyIndex,
    cfg: &MeasurementConfig,
    smag: f64,
    theta: f64,
) -> Result<f64> {
    let range = entropy_range(kind, idx, cfg, smag)?;
    normalize_with(&range, entropy_on_circle(kind, idx, cfg, smag)?(theta))
}

/// Normalizes against a precomputed range; used by scans.
pub fn normalize_with(range: &EntropyRange, value: f64) -> Result<f64> {
    let spread = range.max - range.min;
    if spread <= DEGENERATE_SPREAD {
        return Err(Error::DegenerateFamily(spread));
    }
    Ok(((value - range.min) / spread).clamp(0.0, 1.0))
}

/// Entropy of the given kind at polar angle `theta` on the circle `|s| = smag`.
pub fn renyi_at(kind: StatKind, idx: EntropyIndex, cfg: &MeasurementConfig, smag: f64, theta: f64) -> Result<f64> {
    Ok(entropy_on_circle(kind, idx, cfg, smag)?(theta))
}

/// All `θ ∈ [0, 2π)` where the entropy attains its minimum over the circle,
/// to within `tol` in entropy. Each is a refined local minimum of the grid.
pub fn minimizers(kind: StatKind, idx: EntropyIndex, cfg: &MeasurementConfig, smag: f64, tol: f64) -> Result<Vec<f64>> {
    let f = entropy_on_circle(kind, idx, cfg, smag)?;
    let range = entropy_range(kind, idx, cfg, smag)?;
    let n = THETA_GRID;
    let step = TAU / n as f64;
    let values: Vec<f64> = periodic_grid(0.0, TAU, n).map(&f).collect();
    let mut out: Vec<f64> = Vec::new();
    for i in 0..n {
        let prev = values[(i + n - 1) % n];
        let next = values[(i + 1) % n];
        if values[i] <= prev && values[i] <= next {
            let t = i as f64 * step;
            let (x, v) = golden_min(&f, t - step, t + step, REFINE_TOL);
            if v <= range.min + tol {
                let x = x.rem_euclid(TAU);
                let dup = out.iter().any(|&y| circular_distance(x, y) < 2.0 * step);
                if !dup {
                    out.push(x);
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Classifies a polar angle in the XZ plane as extreme (multiple of π/2) or
/// intermediate (odd multiple of π/4), if it is within `tol` of one.
pub fn classify_angle(theta: f64, tol: f64) -> Option<FamilyKind> {
    let quarter = std::f64::consts::FRAC_PI_4;
    let m = (theta / quarter).round();
    if (theta - m * quarter).abs() > tol {
        return None;
    }
    Some(match (m as i64).rem_euclid(4) {
        0 => FamilyKind::ExtremeZ,
        2 => FamilyKind::ExtremeX,
        _ => FamilyKind::Intermediate,
    })
}

/// The extreme-state representative used by [`delta_r`].
pub const DELTA_R_EXTREME: FamilyKind = FamilyKind::ExtremeZ;

/// `ΔR_α = R_α(p_ext) − R_α(p_int)` with the extreme state `ExtremeZ(+)` and
/// the intermediate state `Intermediate(+, +)`, both at purity `smag`.
///
/// Negative values mean extreme states carry less uncertainty.
pub fn delta_r(kind: StatKind, idx: EntropyIndex, cfg: &MeasurementConfig, smag: f64) -> Result<f64> {
    let ext = family_state(StateFamily::extreme_z(1, smag)?);
    let int = family_state(StateFamily::intermediate(1, 1, smag)?);
    Ok(renyi(&stats_of_kind(kind, &ext, cfg), idx) - renyi(&stats_of_kind(kind, &int, cfg), idx))
}

/// Sign changes of `α ↦ ΔR_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalIndexReport {
    pub kind: StatKind,
    /// Extreme representative used for `ΔR`.
    pub extreme: FamilyKind,
    /// Search interval `(lo, hi]`.
    pub range: (f64, f64),
    /// Strictly increasing roots.
    pub roots: Vec<f64>,
    /// Sign of `ΔR` on each interval between consecutive roots (and the
    /// range ends); one more entry than `roots`.
    pub sign_pattern: Vec<i8>,
}

impl CriticalIndexReport {
    /// The interval endpoints `lo, r₁, …, r_n, hi`.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut b = vec![self.range.0];
        b.extend(&self.roots);
        b.push(self.range.1);
        b
    }
}

/// Scan step for [`critical_indices`].
pub const CRITICAL_SCAN_STEP: f64 = 1e-3;
/// Bisection tolerance for [`critical_indices`].
pub const CRITICAL_ROOT_TOL: f64 = 1e-10;
/// `|ΔR|` at or below this on a scan point counts as no sign information.
const SIGN_ZERO: f64 = 1e-13;
/// Default upper end of the index range.
pub const ALPHA_MAX: f64 = 10.0;

fn sign_of(v: f64) -> i8 {
    if v > SIGN_ZERO {
        1
    } else if v < -SIGN_ZERO {
        -1
    } else {
        0
    }
}

/// Locates every sign change of `ΔR_α` for `α ∈ (lo, hi]` by a scan with step
/// [`CRITICAL_SCAN_STEP`] and bisection of each bracket.
pub fn critical_indices(
    kind: StatKind,
    cfg: &MeasurementConfig,
    smag: f64,
    search_range: (f64, f64),
) -> Result<CriticalIndexReport> {
    let (lo, hi) = search_range;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return domain(format!("invalid index range ({lo}, {hi}]"));
    }
    if !(0.0..=1.0).contains(&smag) {
        return domain(format!("|s| = {smag} outside [0, 1]"));
    }
    let eval = |a: f64| delta_r(kind, EntropyIndex::new(a).expect("positive index"), cfg, smag).expect("validated");
    let steps = ((hi - lo) / CRITICAL_SCAN_STEP).ceil() as usize;
    let mut roots: Vec<f64> = Vec::new();
    let mut last: Option<(f64, i8)> = None;
    for i in 1..=steps {
        let a = if i == steps {
            hi
        } else {
            lo + i as f64 * CRITICAL_SCAN_STEP
        };
        let s = sign_of(eval(a));
        if s == 0 {
            continue;
        }
        if let Some((pa, ps)) = last {
            if ps != s {
                let root = bisect(eval, pa, a, CRITICAL_ROOT_TOL)
                    .ok_or_else(|| Error::Consistency(format!("lost bracket ({pa}, {a})")))?;
                roots.push(root);
            }
        }
        last = Some((a, s));
    }
    let mut bounds = vec![lo];
    bounds.extend(&roots);
    bounds.push(hi);
    let sign_pattern = bounds.windows(2).map(|w| sign_of(eval(0.5 * (w[0] + w[1])))).collect();
    Ok(CriticalIndexReport {
        kind,
        extreme: DELTA_R_EXTREME,
        range: (lo, hi),
        roots,
        sign_pattern,
    })
}
