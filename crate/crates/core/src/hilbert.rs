//! First-principles model of the measurement on `H_S ⊗ H_A`.
//!
//! Nothing here uses the closed-form statistics: the system state is
//! tensored with the apparatus, evolved with the controlled coupling and
//! projected with `Πˣ_j ⊗ |b_k⟩⟨b_k|`. It serves as an independent check of
//! [`crate::statistics::joint_stats`].
//!
//! Basis order for the 4-dimensional space is `system ⊗ apparatus`, with the
//! system's `σz = +1` eigenvector first.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::bloch::BlochState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::statistics::{joint_stats, marginal_stats, JointStats, MeasurementConfig};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds from rows; panics when the rows do not form a square matrix.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Self {
            dim,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn from_real(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Self {
            dim,
            data: rows.iter().flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0))).collect(),
        }
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        let dim = u.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = u[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entry modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim)) <= tol
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    ///
    /// The matrix `A + iB` is embedded as the real symmetric `[[A, −B], [B, A]]`,
    /// whose spectrum is that of `A + iB` with every eigenvalue doubled, and
    /// diagonalized with cyclic Jacobi rotations.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let m = 2 * n;
        let mut a = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = self[(i, j)];
                a[i * m + j] = z.re;
                a[(i + n) * m + (j + n)] = z.re;
                a[i * m + (j + n)] = -z.im;
                a[(i + n) * m + j] = z.im;
            }
        }
        let mut ev = jacobi_symmetric(&mut a, m);
        ev.sort_by(f64::total_cmp);
        ev.into_iter().step_by(2).collect()
    }

    /// Checks the density-operator invariants: Hermitian, unit trace and
    /// positive semidefinite.
    pub fn is_density(&self, tol_herm: f64, tol_pos: f64) -> bool {
        self.is_hermitian(tol_herm)
            && (self.trace() - ONE).norm() <= tol_herm
            && self.hermitian_eigenvalues()[0] >= -tol_pos
    }
}

fn jacobi_symmetric(a: &mut [f64], m: usize) -> Vec<f64> {
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * m + j] * a[i * m + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = a[p * m + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..m).map(|i| a[i * m + i]).collect()
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Inner product `⟨u|v⟩`.
pub fn braket(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[&[ZERO, C64::new(0.0, -1.0)], &[C64::new(0.0, 1.0), ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// `ρ = ½(I + s·σ)`.
pub fn density_matrix(state: &BlochState) -> ComplexMatrix {
    let [x, y, z] = state.components();
    let sum = &(&pauli_x().scale(x.into()) + &pauli_y().scale(y.into())) + &pauli_z().scale(z.into());
    (&ComplexMatrix::identity(2) + &sum).scale(0.5.into())
}

/// Apparatus pointer states and the minimum-noise readout basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ApparatusVectors {
    pub a_plus: [C64; 2],
    pub a_minus: [C64; 2],
    pub b_plus: [C64; 2],
    pub b_minus: [C64; 2],
    /// `φ = π/2 − δ`.
    pub phi_angle: f64,
    /// Common phase applied to the real representatives.
    pub phase: f64,
}

/// Below this `cos φ = sin δ`, the readout basis is taken at its `δ → 0` limit
/// instead of evaluating the `0/0` quotient.
const READOUT_LIMIT_SIN: f64 = 1e-3;

/// Pointer states `a± = (cos(δ/2), ±sin(δ/2))` and readout vectors
/// `b₊ = (cos(φ/2) a₊ − sin(φ/2) a₋) / cos φ`,
/// `b₋ = (−sin(φ/2) a₊ + cos(φ/2) a₋) / cos φ`.
pub fn build_apparatus(cfg: &MeasurementConfig) -> ApparatusVectors {
    build_apparatus_with_phase(cfg, 0.0)
}

/// As [`build_apparatus`], with every pointer state multiplied by `e^{iχ}`.
pub fn build_apparatus_with_phase(cfg: &MeasurementConfig, phase: f64) -> ApparatusVectors {
    let delta = cfg.delta();
    let u = C64::from_polar(1.0, phase);
    let (h_sin, h_cos) = (0.5 * delta).sin_cos();
    let a_plus = [u * h_cos, u * h_sin];
    let a_minus = [u * h_cos, -u * h_sin];
    let phi = std::f64::consts::FRAC_PI_2 - delta;
    let cos_phi = phi.cos();
    let (b_plus, b_minus) = if cos_phi >= READOUT_LIMIT_SIN {
        let (s, c) = (0.5 * phi).sin_cos();
        let comb = |x: f64, y: f64| -> [C64; 2] {
            [
                (a_plus[0] * x + a_minus[0] * y) / cos_phi,
                (a_plus[1] * x + a_minus[1] * y) / cos_phi,
            ]
        };
        (comb(c, -s), comb(-s, c))
    } else {
        // The pointer states become parallel; the quotient tends to the
        // orthonormal pair at ±45° about their common direction.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        ([u * r, u * r], [u * r, -u * r])
    };
    ApparatusVectors {
        a_plus,
        a_minus,
        b_plus,
        b_minus,
        phi_angle: phi,
        phase,
    }
}

/// Fiducial apparatus state `|a⟩ = (1, 0)`.
pub const FIDUCIAL: [C64; 2] = [ONE, ZERO];

/// Planar rotation (times the common phase) taking `|a⟩` to `target`.
fn pointer_unitary(target: &[C64; 2], phase: f64) -> ComplexMatrix {
    let u = C64::from_polar(1.0, phase);
    let (c, s) = (target[0] / u, target[1] / u);
    ComplexMatrix::from_rows(&[&[c * u, -s.conj() * u], &[s * u, c.conj() * u]])
}

/// `U = |+⟩⟨+| ⊗ U₊ + |−⟩⟨−| ⊗ U₋` with `U± |a⟩ = |a±⟩`.
pub fn coupling_unitary(cfg: &MeasurementConfig) -> ComplexMatrix {
    coupling_from_apparatus(&build_apparatus(cfg))
}

fn coupling_from_apparatus(app: &ApparatusVectors) -> ComplexMatrix {
    let up = pointer_unitary(&app.a_plus, app.phase);
    let um = pointer_unitary(&app.a_minus, app.phase);
    let proj_plus = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]);
    let proj_minus = ComplexMatrix::from_real(&[&[0.0, 0.0], &[0.0, 1.0]]);
    &proj_plus.kron(&up) + &proj_minus.kron(&um)
}

/// Joint probabilities `Tr[U(ρ ⊗ |a⟩⟨a|)U† (Πˣ_j ⊗ |b_k⟩⟨b_k|)]`.
pub fn oracle_joint_probs(state: &BlochState, cfg: &MeasurementConfig) -> JointStats {
    oracle_with_apparatus(state, &build_apparatus(cfg))
}

/// [`oracle_joint_probs`] with pointer states carrying a common phase.
pub fn oracle_joint_probs_with_phase(state: &BlochState, cfg: &MeasurementConfig, phase: f64) -> JointStats {
    oracle_with_apparatus(state, &build_apparatus_with_phase(cfg, phase))
}

fn oracle_with_apparatus(state: &BlochState, app: &ApparatusVectors) -> JointStats {
    let evolved = evolved_state(state, app);
    let id = ComplexMatrix::identity(2);
    let sx = pauli_x();
    let mut p = [[0.0; 2]; 2];
    for (row, j) in p.iter_mut().zip([1.0, -1.0]) {
        let proj_x = (&id + &sx.scale(j.into())).scale(0.5.into());
        for (cell, b) in row.iter_mut().zip([&app.b_plus, &app.b_minus]) {
            let effect = proj_x.kron(&ComplexMatrix::outer(b, b));
            *cell = (&evolved * &effect).trace().re;
        }
    }
    JointStats { p }
}

/// `U (ρ ⊗ |a⟩⟨a|) U†`.
pub fn evolved_state_for(state: &BlochState, cfg: &MeasurementConfig) -> ComplexMatrix {
    evolved_state(state, &build_apparatus(cfg))
}

fn evolved_state(state: &BlochState, app: &ApparatusVectors) -> ComplexMatrix {
    let u = coupling_from_apparatus(app);
    let initial = density_matrix(state).kron(&ComplexMatrix::outer(&FIDUCIAL, &FIDUCIAL));
    &(&u * &initial) * &u.adjoint()
}

/// Largest disagreement found by [`oracle_sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSweep {
    pub trials: usize,
    pub max_joint_deviation: f64,
    pub max_marginal_deviation: f64,
    /// State and `δ` at which the joint deviation peaked.
    pub worst: (BlochState, f64),
}

impl OracleSweep {
    pub fn max_deviation(&self) -> f64 {
        self.max_joint_deviation.max(self.max_marginal_deviation)
    }
}

/// Compares the oracle with the closed-form joint and marginal statistics on
/// `trials` states drawn uniformly from the Bloch ball, each with `δ` uniform
/// in `[0, π/2]`. Draws come from ChaCha8 seeded with `seed`.
pub fn oracle_sweep(trials: usize, seed: u64) -> Result<OracleSweep> {
    if trials == 0 {
        return domain("trial count must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = OracleSweep {
        trials,
        max_joint_deviation: 0.0,
        max_marginal_deviation: 0.0,
        worst: (BlochState::mixed(), 0.0),
    };
    for _ in 0..trials {
        let state = loop {
            let v: [f64; 3] = [
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
            ];
            if let Ok(s) = BlochState::new(v[0], v[1], v[2]) {
                if s.norm() <= 1.0 {
                    break s;
                }
            }
        };
        let delta = rng.gen_range(0.0..=FRAC_PI_2);
        let cfg = MeasurementConfig::new(delta)?;
        let oracle = oracle_joint_probs(&state, &cfg);
        let dj = oracle.max_abs_diff(&joint_stats(&state, &cfg));
        if dj >= out.max_joint_deviation {
            out.max_joint_deviation = dj;
            out.worst = (state, delta);
        }
        let (mx, mz) = marginal_stats(&state, &cfg);
        let got = oracle.marginal_x().into_iter().chain(oracle.marginal_z());
        for (a, b) in got.zip(mx.values().iter().chain(mz.values())) {
            out.max_marginal_deviation = out.max_marginal_deviation.max((a - b).abs());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn cfg(d: f64) -> MeasurementConfig {
        MeasurementConfig::new(d).unwrap()
    }

    #[test]
    fn apparatus_orthogonal_at_right_angle() {
        let app = build_apparatus(&cfg(FRAC_PI_2));
        assert!(braket(&app.a_plus, &app.a_minus).norm() < 1e-15);
        for (b, a) in [(app.b_plus, app.a_plus), (app.b_minus, app.a_minus)] {
            assert!(b.iter().zip(a).all(|(x, y)| (x - y).norm() < 1e-15));
        }
    }

    #[test]
    fn apparatus_overlap_balanced() {
        let app = build_apparatus(&cfg(FRAC_PI_4));
        let ov = braket(&app.a_plus, &app.a_minus);
        assert!((ov.re - FRAC_1_SQRT_2).abs() < 1e-15 && ov.im.abs() < 1e-15);
    }

    #[test]
    fn readout_basis_orthonormal() {
        for i in 0..=200 {
            let d = FRAC_PI_2 * i as f64 / 200.0;
            let app = build_apparatus(&cfg(d));
            assert!(braket(&app.b_plus, &app.b_minus).norm() < 1e-12, "δ = {d}");
            assert!((braket(&app.b_plus, &app.b_plus).re - 1.0).abs() < 1e-12);
            assert!((braket(&app.b_minus, &app.b_minus).re - 1.0).abs() < 1e-12);
            let ov = braket(&app.a_plus, &app.a_minus);
            assert!((ov.re - d.cos()).abs() < 1e-15 && ov.re >= 0.0);
        }
    }

    #[test]
    fn coupling_is_unitary_and_marks_paths() {
        for d in [0.0, 0.3, FRAC_PI_4, 1.2, FRAC_PI_2] {
            let u = coupling_unitary(&cfg(d));
            assert!(u.is_unitary(1e-12));
            let app = build_apparatus(&cfg(d));
            let plus_a = [ONE, ZERO, ZERO, ZERO];
            let minus_a = [ZERO, ZERO, ONE, ZERO];
            let out_p = u.apply(&plus_a);
            let out_m = u.apply(&minus_a);
            let want_p = [app.a_plus[0], app.a_plus[1], ZERO, ZERO];
            let want_m = [ZERO, ZERO, app.a_minus[0], app.a_minus[1]];
            assert!(out_p.iter().zip(want_p).all(|(x, y)| (x - y).norm() < 1e-15));
            assert!(out_m.iter().zip(want_m).all(|(x, y)| (x - y).norm() < 1e-15));
        }
        let app = build_apparatus(&cfg(FRAC_PI_2));
        assert!(braket(&app.a_plus, &app.a_minus).norm() < 1e-15);
        let app = build_apparatus(&cfg(0.0));
        assert!((braket(&app.a_plus, &app.a_minus) - ONE).norm() < 1e-15);
    }

    #[test]
    fn oracle_examples() {
        for d in [0.0, 0.7, FRAC_PI_2] {
            let j = oracle_joint_probs(&BlochState::mixed(), &cfg(d));
            assert!(j.as_array().iter().all(|p| (p - 0.25).abs() < 1e-15));
        }
        let j = oracle_joint_probs(&BlochState::new(0.0, 0.0, 1.0).unwrap(), &cfg(FRAC_PI_2));
        let mz = j.marginal_z();
        assert!((mz[0] - 1.0).abs() < 1e-15 && mz[1].abs() < 1e-15);
    }

    #[test]
    fn oracle_matches_closed_form_near_zero_delta() {
        let s = BlochState::new(0.5, -0.3, 0.6).unwrap();
        for d in [0.0, 1e-9, 1e-4, 2e-3] {
            let diff = oracle_joint_probs(&s, &cfg(d)).max_abs_diff(&joint_stats(&s, &cfg(d)));
            assert!(diff < 1e-12, "δ = {d}: {diff}");
        }
    }

    #[test]
    fn density_invariants() {
        let s = BlochState::new(0.6, 0.0, 0.8).unwrap();
        let rho = density_matrix(&s);
        assert!(rho.is_density(1e-12, 1e-10));
        let ev = rho.hermitian_eigenvalues();
        assert!(ev[0].abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
        let big = evolved_state_for(&s, &cfg(0.4));
        assert!(big.is_density(1e-12, 1e-10));
    }

    #[test]
    fn eigenvalues_of_known_hermitian() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = ComplexMatrix::from_rows(&[
            &[C64::new(2.0, 0.0), C64::new(0.0, 1.0)],
            &[C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        ]);
        let ev = m.hermitian_eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
        let neg = ComplexMatrix::from_real(&[&[0.5, 0.6], &[0.6, 0.5]]);
        assert!(!neg.is_density(1e-12, 1e-10));
    }

    #[test]
    fn phase_freedom() {
        let s = BlochState::new(-0.2, 0.5, 0.7).unwrap();
        for d in [0.1, FRAC_PI_4, 1.3] {
            let base = oracle_joint_probs(&s, &cfg(d));
            for chi in [0.4, 2.0, -1.1] {
                let ph = oracle_joint_probs_with_phase(&s, &cfg(d), chi);
                assert!(base.max_abs_diff(&ph) < 1e-12);
            }
        }
    }

    #[test]
    fn sweep_is_reproducible_and_tight() {
        let a = oracle_sweep(200, 7).unwrap();
        let b = oracle_sweep(200, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.max_deviation() <= 1e-12);
        assert!(oracle_sweep(0, 7).is_err());
    }
}
