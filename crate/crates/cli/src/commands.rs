use std::f64::consts::{FRAC_PI_4, PI, SQRT_2, TAU};

use jointur::bloch::FamilyKind;
use jointur::duality::duality_report;
use jointur::entropy::{critical_indices, delta_r, entropy_range, normalize_with, renyi_at, EntropyIndex};
use jointur::hilbert::oracle_sweep;
use jointur::majorization::{
    attainability_gap, closed_form_bound, compare, compute_bound_vector, extreme_and_intermediate,
    purity_threshold_joint_vs_intrinsic, NamedVector, Verdict,
};
use jointur::statistics::{MeasurementConfig, ProbVec, StatKind};
use jointur::Error;

use crate::output::{Cell, Table};

/// Largest allowed deviation of a computed bound from its closed form.
pub const BOUND_TOL: f64 = 1e-6;
/// Offset from the purity threshold at which the bracketing verdicts are taken.
pub const THRESHOLD_PROBE: f64 = 0.01;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or inputs outside a domain; exit code 2.
    Usage(String),
    /// A numerical check did not hold; exit code 1.
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// A table plus, for verification commands, the reason the check failed.
pub struct Report {
    pub table: Table,
    pub failure: Option<String>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Report { table, failure: None }
    }
}

/// Unit handling for angles read from flags and written to tables.
#[derive(Debug, Clone, Copy)]
pub struct Angles {
    pub degrees: bool,
}

impl Angles {
    pub fn to_rad(self, v: f64) -> f64 {
        if self.degrees {
            v.to_radians()
        } else {
            v
        }
    }

    pub fn to_unit(self, v: f64) -> f64 {
        if self.degrees {
            v.to_degrees()
        } else {
            v
        }
    }

    pub fn config(self, delta: Option<f64>) -> Result<MeasurementConfig, CliError> {
        Ok(MeasurementConfig::new(delta.map_or(FRAC_PI_4, |d| self.to_rad(d)))?)
    }
}

fn grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(move |i| if i + 1 == points { hi } else { lo + i as f64 * step })
}

fn verdict_cell(v: Verdict) -> Cell {
    v.to_string().into()
}

pub fn scan_theta(
    angles: Angles,
    kind: StatKind,
    alphas: &[f64],
    delta: Option<f64>,
    smag: f64,
    points: usize,
) -> Result<Report, CliError> {
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let cfg = angles.config(delta)?;
    let indices: Vec<EntropyIndex> = alphas.iter().map(|&a| EntropyIndex::new(a)).collect::<Result<_, _>>()?;
    let ranges = indices
        .iter()
        .map(|&idx| entropy_range(kind, idx, &cfg, smag))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table =
        Table::new(std::iter::once("theta".to_string()).chain(indices.iter().map(|i| format!("alpha_{i}"))));
    for theta in grid(0.0, TAU, points) {
        let mut row: Vec<Cell> = vec![angles.to_unit(theta).into()];
        for (idx, range) in indices.iter().zip(&ranges) {
            row.push(normalize_with(range, renyi_at(kind, *idx, &cfg, smag, theta)?)?.into());
        }
        table.push(row);
    }
    Ok(table.into())
}

pub fn delta_r_table(
    lo: f64,
    hi: f64,
    step: f64,
    delta: Option<f64>,
    smag: f64,
    angles: Angles,
) -> Result<Report, CliError> {
    if !(lo >= 0.0 && hi > lo && step > 0.0 && hi.is_finite()) {
        return Err(CliError::Usage(format!(
            "--alpha-range needs 0 ≤ LO < HI and STEP > 0, got {lo} {hi} {step}"
        )));
    }
    let cfg = angles.config(delta)?;
    let n = ((hi - lo) / step * (1.0 + 1e-12)).floor() as usize;
    let mut table = Table::new(["alpha", "dR_joint", "dR_marginal_product", "dR_intrinsic_product"]);
    for i in 1..=n {
        let alpha = lo + i as f64 * step;
        let idx = EntropyIndex::new(alpha)?;
        let mut row: Vec<Cell> = vec![alpha.into()];
        for kind in StatKind::ALL {
            row.push(delta_r(kind, idx, &cfg, smag)?.into());
        }
        table.push(row);
    }
    Ok(table.into())
}

fn family_name(kind: FamilyKind) -> &'static str {
    match kind {
        FamilyKind::ExtremeX => "extreme-x",
        FamilyKind::ExtremeZ => "extreme-z",
        FamilyKind::Intermediate => "intermediate",
    }
}

pub fn critical_alpha(
    kinds: &[StatKind],
    delta: Option<f64>,
    smag: f64,
    alpha_max: f64,
    angles: Angles,
) -> Result<Report, CliError> {
    let cfg = angles.config(delta)?;
    let mut table = Table::new(["kind", "extreme", "segment", "alpha_lo", "alpha_hi", "sign"]);
    for &kind in kinds {
        let report = critical_indices(kind, &cfg, smag, (0.0, alpha_max))?;
        let b = report.boundaries();
        for (i, (w, sign)) in b.windows(2).zip(&report.sign_pattern).enumerate() {
            table.push(vec![
                kind.name().into(),
                family_name(report.extreme).into(),
                (i + 1).into(),
                w[0].into(),
                w[1].into(),
                f64::from(*sign).into(),
            ]);
        }
    }
    Ok(table.into())
}

pub fn bounds(delta: Option<f64>, angles: Angles) -> Result<Report, CliError> {
    let cfg = angles.config(delta)?;
    let balanced = (cfg.delta() - FRAC_PI_4).abs() <= 1e-15;
    let vectors = StatKind::ALL
        .iter()
        .map(|&k| compute_bound_vector(k, &cfg))
        .collect::<Result<Vec<ProbVec>, _>>()?;
    let mut columns: Vec<String> = vec!["kind".into()];
    columns.extend((1..=4).map(|i| format!("w{i}")));
    columns.extend((1..=4).map(|i| format!("closed_w{i}")));
    columns.extend(["max_deviation", "attainability_gap"].map(String::from));
    columns.extend(
        StatKind::ALL
            .iter()
            .map(|k| format!("vs_{}", k.name().replace('-', "_"))),
    );
    let mut table = Table::new(columns);
    let mut failure = None;
    for (&kind, w) in StatKind::ALL.iter().zip(&vectors) {
        let mut row: Vec<Cell> = vec![kind.name().into()];
        row.extend(w.values().iter().map(|&v| Cell::from(v)));
        if balanced {
            let closed = closed_form_bound(kind);
            let dev = w
                .values()
                .iter()
                .zip(closed)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            row.extend(closed.map(Cell::from));
            row.push(dev.into());
            if dev > BOUND_TOL && failure.is_none() {
                failure = Some(format!("{kind} bound deviates from its closed form by {dev:e}"));
            }
        } else {
            row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]);
        }
        row.push(attainability_gap(kind, &cfg, w).1.into());
        for other in &vectors {
            row.push(verdict_cell(
                compare(w, other, jointur::majorization::DEFAULT_TOL).verdict,
            ));
        }
        table.push(row);
    }
    Ok(Report { table, failure })
}

fn parse_vector(spec: &str, cfg: &MeasurementConfig, smag: f64) -> Result<ProbVec, CliError> {
    if let Some(named) = NamedVector::parse(spec) {
        return Ok(named.evaluate(cfg, smag)?);
    }
    let values = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| {
            let names: Vec<&str> = NamedVector::ALL.iter().map(|v| v.name()).collect();
            CliError::Usage(format!(
                "`{spec}` is neither a comma-separated list of numbers nor one of {}",
                names.join(", ")
            ))
        })?;
    Ok(ProbVec::new(values)?)
}

pub fn compare_vectors(
    p: &str,
    q: &str,
    tol: f64,
    smag: f64,
    delta: Option<f64>,
    angles: Angles,
) -> Result<Report, CliError> {
    if tol.is_nan() || tol < 0.0 {
        return Err(CliError::Usage(format!("--tol must be non-negative, got {tol}")));
    }
    let cfg = angles.config(delta)?;
    let (pv, qv) = (parse_vector(p, &cfg, smag)?, parse_vector(q, &cfg, smag)?);
    let rel = compare(&pv, &qv, tol);
    let mut table = Table::new(["p", "q", "verdict", "witness_k1", "witness_k2"]);
    table.push(vec![
        p.into(),
        q.into(),
        verdict_cell(rel.verdict),
        rel.witness.map(|w| w.0).into(),
        rel.witness.map(|w| w.1).into(),
    ]);
    Ok(table.into())
}

pub fn duality(delta: Option<f64>, points: usize, angles: Angles) -> Result<Report, CliError> {
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let cfg = angles.config(delta)?;
    let mut table = Table::new(["theta", "D", "V", "P", "sum_sq"]);
    for theta in grid(0.0, PI, points) {
        let r = duality_report(theta, &cfg);
        table.push(vec![
            angles.to_unit(theta).into(),
            r.distinguishability.into(),
            r.visibility.into(),
            r.predictability.into(),
            r.sum_sq.into(),
        ]);
    }
    Ok(table.into())
}

pub fn oracle_check(trials: usize, seed: u64, tol: f64) -> Result<Report, CliError> {
    if tol.is_nan() || tol < 0.0 {
        return Err(CliError::Usage(format!("--tol must be non-negative, got {tol}")));
    }
    let sweep = oracle_sweep(trials, seed)?;
    let dev = sweep.max_deviation();
    let pass = dev <= tol;
    let mut table = Table::new([
        "trials",
        "seed",
        "tol",
        "max_joint_deviation",
        "max_marginal_deviation",
        "status",
    ]);
    table.push(vec![
        trials.into(),
        seed.into(),
        tol.into(),
        sweep.max_joint_deviation.into(),
        sweep.max_marginal_deviation.into(),
        if pass { "pass" } else { "fail" }.into(),
    ]);
    let failure = (!pass).then(|| format!("oracle deviation {dev:e} exceeds {tol:e}"));
    Ok(Report { table, failure })
}

pub fn threshold() -> Result<Report, CliError> {
    let t = purity_threshold_joint_vs_intrinsic();
    let exact = 2.0 * (SQRT_2 - 1.0);
    let cfg = MeasurementConfig::balanced();
    let verdict = |s: f64| -> Result<Verdict, CliError> {
        let (_, joint) = extreme_and_intermediate(StatKind::Joint, &cfg, s)?;
        let (_, intrinsic) = extreme_and_intermediate(StatKind::IntrinsicProduct, &cfg, s)?;
        Ok(compare(&joint, &intrinsic, jointur::majorization::DEFAULT_TOL).verdict)
    };
    let (below, above) = (t - THRESHOLD_PROBE, t + THRESHOLD_PROBE);
    let (vb, va) = (verdict(below)?, verdict(above)?);
    let ok = (t - exact).abs() <= 1e-9 && vb == Verdict::MajorizedBy && va == Verdict::Incomparable;
    let mut table = Table::new([
        "threshold",
        "closed_form",
        "deviation",
        "smag_below",
        "verdict_below",
        "smag_above",
        "verdict_above",
        "status",
    ]);
    table.push(vec![
        t.into(),
        exact.into(),
        (t - exact).into(),
        below.into(),
        verdict_cell(vb),
        above.into(),
        verdict_cell(va),
        if ok { "pass" } else { "fail" }.into(),
    ]);
    let failure = (!ok).then(|| "purity threshold bracket does not hold".to_string());
    Ok(Report { table, failure })
}
