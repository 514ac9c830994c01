//! Qubit states in the Bloch picture.
//!
//! A density operator `ρ = ½(I + s·σ)` is stored as its Bloch vector `s`.
//! States in the XZ plane (`s_y = 0`) are ordinary [`BlochState`]s; every
//! downstream formula is written for a general `s`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{domain, Result};

/// Slack allowed on `|s| ≤ 1` before a vector is rejected as unphysical.
pub const PHYSICALITY_TOL: f64 = 1e-12;

/// Bloch vector of a qubit density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    sx: f64,
    sy: f64,
    sz: f64,
}

impl BlochState {
    /// Builds a state, rejecting vectors that leave the Bloch ball.
    pub fn new(sx: f64, sy: f64, sz: f64) -> Result<Self> {
        if !(sx.is_finite() && sy.is_finite() && sz.is_finite()) {
            return domain("Bloch vector components must be finite");
        }
        let norm_sq = sx * sx + sy * sy + sz * sz;
        if norm_sq > 1.0 + PHYSICALITY_TOL {
            return domain(format!("|s|² = {norm_sq} exceeds 1"));
        }
        Ok(Self { sx, sy, sz })
    }

    /// State in the XZ plane at polar angle `theta` (any real value, measured
    /// from +z towards +x) with `|s| = smag`.
    pub fn xz(smag: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&smag) {
            return domain(format!("|s| = {smag} outside [0, 1]"));
        }
        Self::new(smag * theta.sin(), 0.0, smag * theta.cos())
    }

    /// The maximally mixed state.
    pub const fn mixed() -> Self {
        Self {
            sx: 0.0,
            sy: 0.0,
            sz: 0.0,
        }
    }

    pub fn sx(&self) -> f64 {
        self.sx
    }

    pub fn sy(&self) -> f64 {
        self.sy
    }

    pub fn sz(&self) -> f64 {
        self.sz
    }

    pub fn components(&self) -> [f64; 3] {
        [self.sx, self.sy, self.sz]
    }

    /// Length `|s|` of the Bloch vector.
    pub fn norm(&self) -> f64 {
        (self.sx * self.sx + self.sy * self.sy + self.sz * self.sz).sqrt()
    }
}

/// Spherical parametrization `(θ, φ, |s|)` of a Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateAngles {
    pub theta: f64,
    pub phi: f64,
    pub smag: f64,
}

impl StateAngles {
    pub fn new(theta: f64, phi: f64, smag: f64) -> Self {
        Self { theta, phi, smag }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=PI).contains(&self.theta) {
            return domain(format!("theta = {} outside [0, π]", self.theta));
        }
        if !(0.0..2.0 * PI).contains(&self.phi) {
            return domain(format!("phi = {} outside [0, 2π)", self.phi));
        }
        if !(0.0..=1.0).contains(&self.smag) {
            return domain(format!("|s| = {} outside [0, 1]", self.smag));
        }
        Ok(())
    }
}

/// `s = |s| (sinθ cosφ, sinθ sinφ, cosθ)`.
pub fn bloch_from_angles(angles: StateAngles) -> Result<BlochState> {
    angles.validate()?;
    let StateAngles { theta, phi, smag } = angles;
    BlochState::new(
        smag * theta.sin() * phi.cos(),
        smag * theta.sin() * phi.sin(),
        smag * theta.cos(),
    )
}

/// Which of the special state families a [`StateFamily`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// Eigenstates of `σx`, mixed towards `I/2`.
    ExtremeX,
    /// Eigenstates of `σz`, mixed towards `I/2`.
    ExtremeZ,
    /// Eigenstates of `σx ± σz`, mixed towards `I/2`.
    Intermediate,
}

/// A member of the extreme or intermediate families with purity `|s|`.
///
/// For the extreme kinds only `sign1` is used. For intermediate states
/// `sign1` is the sign of `s_z` and `sign2` the relative sign of `s_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateFamily {
    kind: FamilyKind,
    sign1: i8,
    sign2: i8,
    smag: f64,
}

impl StateFamily {
    pub fn new(kind: FamilyKind, sign1: i8, sign2: i8, smag: f64) -> Result<Self> {
        if sign1.abs() != 1 || sign2.abs() != 1 {
            return domain("family signs must be +1 or -1");
        }
        if !(0.0..=1.0).contains(&smag) {
            return domain(format!("|s| = {smag} outside [0, 1]"));
        }
        Ok(Self {
            kind,
            sign1,
            sign2,
            smag,
        })
    }

    pub fn extreme_x(sign: i8, smag: f64) -> Result<Self> {
        Self::new(FamilyKind::ExtremeX, sign, 1, smag)
    }

    pub fn extreme_z(sign: i8, smag: f64) -> Result<Self> {
        Self::new(FamilyKind::ExtremeZ, sign, 1, smag)
    }

    pub fn intermediate(sign1: i8, sign2: i8, smag: f64) -> Result<Self> {
        Self::new(FamilyKind::Intermediate, sign1, sign2, smag)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn smag(&self) -> f64 {
        self.smag
    }
}

/// Bloch vector of the family member.
pub fn family_state(f: StateFamily) -> BlochState {
    let s1 = f64::from(f.sign1);
    let s2 = f64::from(f.sign2);
    let (sx, sz) = match f.kind {
        FamilyKind::ExtremeX => (s1 * f.smag, 0.0),
        FamilyKind::ExtremeZ => (0.0, s1 * f.smag),
        FamilyKind::Intermediate => {
            let sz = s1 * f.smag * FRAC_1_SQRT_2;
            (s2 * sz, sz)
        }
    };
    BlochState { sx, sy: 0.0, sz }
}

/// `Tr ρ² = ½(1 + |s|²)`.
pub fn purity(state: &BlochState) -> f64 {
    let [x, y, z] = state.components();
    0.5 * (1.0 + x * x + y * y + z * z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn close(a: [f64; 3], b: [f64; 3]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15)
    }

    #[test]
    fn angles_examples() {
        let s = bloch_from_angles(StateAngles::new(0.0, 0.0, 1.0)).unwrap();
        assert!(close(s.components(), [0.0, 0.0, 1.0]));
        let s = bloch_from_angles(StateAngles::new(FRAC_PI_4, 0.0, 1.0)).unwrap();
        assert!(close(s.components(), [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2]));
        let s = bloch_from_angles(StateAngles::new(PI / 2.0, 0.0, 0.5)).unwrap();
        assert!(close(s.components(), [0.5, 0.0, 0.0]));
    }

    #[test]
    fn angles_out_of_range() {
        assert!(bloch_from_angles(StateAngles::new(-0.1, 0.0, 1.0)).is_err());
        assert!(bloch_from_angles(StateAngles::new(0.1, 2.0 * PI, 1.0)).is_err());
        assert!(bloch_from_angles(StateAngles::new(0.1, 0.0, 1.1)).is_err());
    }

    #[test]
    fn rejects_unphysical() {
        assert!(BlochState::new(1.0, 1e-5, 0.0).is_err());
        assert!(BlochState::new(0.0, 0.0, 1.0 + 1e-9).is_err());
        assert!(BlochState::new(0.0, 0.0, 1.0 + 1e-13).is_ok());
        assert!(BlochState::new(0.6, 0.0, 0.8).is_ok());
        assert!(BlochState::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn family_examples() {
        let s = family_state(StateFamily::extreme_z(1, 1.0).unwrap());
        assert_eq!(s.components(), [0.0, 0.0, 1.0]);
        let s = family_state(StateFamily::intermediate(1, 1, 1.0).unwrap());
        assert!(close(s.components(), [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2]));
        let s = family_state(StateFamily::extreme_x(-1, 0.4).unwrap());
        assert_eq!(s.components(), [-0.4, 0.0, 0.0]);
        assert!(StateFamily::intermediate(0, 1, 1.0).is_err());
    }

    #[test]
    fn family_invariants() {
        for smag in [0.0, 0.3, 1.0] {
            for a in [1, -1] {
                for b in [1, -1] {
                    let s = family_state(StateFamily::intermediate(a, b, smag).unwrap());
                    assert_eq!(s.sy(), 0.0);
                    assert_eq!(s.sx().abs(), s.sz().abs());
                    assert!((s.sz().abs() - smag / 2f64.sqrt()).abs() < 1e-15);
                }
                let x = family_state(StateFamily::extreme_x(a, smag).unwrap());
                assert_eq!((x.sy(), x.sz()), (0.0, 0.0));
                let z = family_state(StateFamily::extreme_z(a, smag).unwrap());
                assert_eq!((z.sx(), z.sy()), (0.0, 0.0));
            }
        }
    }

    #[test]
    fn purity_examples() {
        assert_eq!(purity(&BlochState::new(0.0, 0.0, 1.0).unwrap()), 1.0);
        assert_eq!(purity(&BlochState::mixed()), 0.5);
        assert!((purity(&BlochState::new(0.6, 0.0, 0.8).unwrap()) - 1.0).abs() < 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn norm_matches_smag(theta in 0.0..=PI, phi in 0.0..(2.0 * PI), smag in 0.0..=1.0f64) {
                let s = bloch_from_angles(StateAngles::new(theta, phi, smag)).unwrap();
                prop_assert!((s.norm() - smag).abs() < 1e-14);
            }

            #[test]
            fn purity_monotone(a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                let p_lo = purity(&BlochState::xz(lo, 0.3).unwrap());
                let p_hi = purity(&BlochState::xz(hi, 1.1).unwrap());
                prop_assert!(p_lo <= p_hi + 1e-15);
            }
        }
    }
}
