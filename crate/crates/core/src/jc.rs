//! Jaynes-Cummings zone propagation.
//!
//! Inside a zone the interaction-picture Hamiltonian is
//! `H = g (|e><g| a e^{i Delta t} + a^dag |g><e| e^{-i Delta t})`, with `t`
//! read on one clock shared by the whole Ramsey sequence. It couples only the
//! pairs `{|e,n>, |g,n+1>}`, and each pair evolves under the closed-form
//! amplitudes [`amp_c`] / [`amp_s`]:
//!
//! ```text
//! c_e' = e^{i Delta tau/2} ( C* c_e - S e^{i Delta t0} c_g )
//! c_g' = e^{-i Delta tau/2} ( -S e^{-i Delta t0} c_e + C c_g )
//! ```
//!
//! where `t0` is the zone entry time. [`numeric_propagate`] integrates the
//! same Hamiltonian with RK4 directly from the ladder operators and serves as
//! the independent check on every phase convention above.

use crate::fock::{JointState, Level, PureState};
use crate::{Error, Result, C64};

/// An occupied `|e, N-1>` level above this weight cannot be propagated.
pub const TRUNCATION_TOL: f64 = 1e-20;

/// Default RK4 step count for [`numeric_propagate`].
pub const DEFAULT_STEPS: usize = 4096;

const I: C64 = C64::new(0.0, 1.0);

/// One Ramsey zone: a cavity mode the atom couples to for time `tau`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZoneConfig {
    /// Vacuum Rabi coupling.
    pub g: f64,
    /// Interaction time.
    pub tau: f64,
    /// Atomic minus field frequency.
    pub detuning: f64,
    /// Cavity mode, 1 or 2.
    pub mode: usize,
    /// Entry time on the sequence clock.
    pub start: f64,
}

impl ZoneConfig {
    pub fn new(g: f64, tau: f64, detuning: f64, mode: usize) -> Self {
        Self {
            g,
            tau,
            detuning,
            mode,
            start: 0.0,
        }
    }

    /// Resonant zone with unit coupling, so `tau` is the pulse area `g tau`.
    pub fn resonant(mode: usize, area: f64) -> Self {
        Self::new(1.0, area, 0.0, mode)
    }

    pub fn starting_at(mut self, start: f64) -> Self {
        self.start = start;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.g, self.tau, self.detuning, self.start]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParameter(
                "zone parameters must be finite".into(),
            ));
        }
        if self.tau < 0.0 {
            return Err(Error::InvalidParameter("zone tau must be >= 0".into()));
        }
        if self.g < 0.0 {
            return Err(Error::InvalidParameter("zone g must be >= 0".into()));
        }
        if self.mode != 1 && self.mode != 2 {
            return Err(Error::InvalidParameter(format!(
                "zone mode {} is not 1 or 2",
                self.mode
            )));
        }
        Ok(())
    }

    pub fn rabi(&self, n: i64) -> f64 {
        rabi(n, self.g, self.detuning)
    }

    pub fn c(&self, n: i64) -> C64 {
        amp_c(n, self.g, self.detuning, self.tau)
    }

    pub fn s(&self, n: i64) -> C64 {
        amp_s(n, self.g, self.detuning, self.tau)
    }
}

/// Free flight between zones with externally imposed level phases.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GapConfig {
    pub t: f64,
    pub phi_e: f64,
    pub phi_g: f64,
}

impl GapConfig {
    pub fn new(t: f64, phi_e: f64, phi_g: f64) -> Self {
        Self { t, phi_e, phi_g }
    }

    /// Gap with relative phase `phi = phi_e - phi_g` carried on `|e>`.
    pub fn with_phase(t: f64, phi: f64) -> Self {
        Self::new(t, phi, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t.is_finite() && self.phi_e.is_finite() && self.phi_g.is_finite()) {
            return Err(Error::InvalidParameter(
                "gap parameters must be finite".into(),
            ));
        }
        if self.t < 0.0 {
            return Err(Error::InvalidParameter("gap T must be >= 0".into()));
        }
        Ok(())
    }
}

/// `Omega_n = sqrt(Delta^2 + 4 g^2 (n + 1))`.
pub fn rabi(n: i64, g: f64, detuning: f64) -> f64 {
    debug_assert!(n >= -1);
    (detuning * detuning + 4.0 * g * g * (n + 1) as f64).sqrt()
}

/// `C_n(tau) = cos(Omega tau/2) + i (Delta/Omega) sin(Omega tau/2)`.
///
/// `n = -1` gives `e^{i Delta tau/2}`; `Omega = 0` gives 1.
pub fn amp_c(n: i64, g: f64, detuning: f64, tau: f64) -> C64 {
    let omega = rabi(n, g, detuning);
    if omega == 0.0 {
        return C64::new(1.0, 0.0);
    }
    let half = omega * tau / 2.0;
    C64::new(half.cos(), detuning / omega * half.sin())
}

/// `S_n(tau) = (2 i g sqrt(n+1) / Omega) sin(Omega tau/2)`; zero for `n = -1`.
pub fn amp_s(n: i64, g: f64, detuning: f64, tau: f64) -> C64 {
    let omega = rabi(n, g, detuning);
    if omega == 0.0 || n < 0 {
        return C64::new(0.0, 0.0);
    }
    let half = omega * tau / 2.0;
    I * (2.0 * g * ((n + 1) as f64).sqrt() / omega * half.sin())
}

/// Flat index helper over `(atom, n, mu)` storage.
#[derive(Clone, Copy)]
struct Strides {
    n1: usize,
    n2: usize,
}

impl Strides {
    fn of(state: &JointState) -> Self {
        let (n1, n2) = state.dims();
        Self { n1, n2 }
    }

    fn at(&self, level: Level, n: usize, mu: usize) -> usize {
        (level.index() * self.n1 + n) * self.n2 + mu
    }

    /// `(dim of the zone's mode, dim of the spectator mode)`.
    fn mode_dims(&self, mode: usize) -> (usize, usize) {
        if mode == 1 {
            (self.n1, self.n2)
        } else {
            (self.n2, self.n1)
        }
    }

    /// Index with photon number `k` in the zone's mode and `other` in the spectator.
    fn in_mode(&self, mode: usize, level: Level, k: usize, other: usize) -> usize {
        if mode == 1 {
            self.at(level, k, other)
        } else {
            self.at(level, other, k)
        }
    }
}

/// Exact propagation through one zone.
pub fn zone_propagate(state: &JointState, zone: &ZoneConfig) -> Result<JointState> {
    zone.validate()?;
    let st = Strides::of(state);
    let (dim, spectator) = st.mode_dims(zone.mode);
    let src = state.amplitudes();
    let mut out = src.to_vec();

    let d = zone.detuning;
    let fwd = C64::from_polar(1.0, d * zone.tau / 2.0);
    let entry = C64::from_polar(1.0, d * zone.start);
    let sectors: Vec<(C64, C64)> = (0..dim as i64 - 1)
        .map(|n| (zone.c(n), zone.s(n)))
        .collect();

    for other in 0..spectator {
        let top = st.in_mode(zone.mode, Level::Excited, dim - 1, other);
        if src[top].norm_sqr() > TRUNCATION_TOL {
            return Err(Error::TruncationOverflow {
                mode: zone.mode,
                n: dim - 1,
                dim,
            });
        }
        for (n, &(c, s)) in sectors.iter().enumerate() {
            let ie = st.in_mode(zone.mode, Level::Excited, n, other);
            let ig = st.in_mode(zone.mode, Level::Ground, n + 1, other);
            let (ce, cg) = (src[ie], src[ig]);
            out[ie] = fwd * (c.conj() * ce - s * entry * cg);
            out[ig] = fwd.conj() * (-s * entry.conj() * ce + c * cg);
        }
        // |g,0> is dark: C_{-1} cancels the e^{-i Delta tau/2} factor exactly.
    }
    Ok(JointState::from_raw(state.dims(), out))
}

/// Applies the level phases `|e> -> e^{-i phi_e}|e>`, `|g> -> e^{-i phi_g}|g>`.
///
/// The Hamiltonian vanishes between zones, so in the interaction picture the
/// free flight is otherwise the identity; the `Delta T` phase of the second
/// zone comes from its later entry time.
pub fn gap_propagate(state: &JointState, gap: &GapConfig) -> Result<JointState> {
    gap.validate()?;
    let mut out = state.clone();
    let pe = C64::from_polar(1.0, -gap.phi_e);
    let pg = C64::from_polar(1.0, -gap.phi_g);
    out.branch_amps_mut(Level::Excited)
        .iter_mut()
        .for_each(|a| *a *= pe);
    out.branch_amps_mut(Level::Ground)
        .iter_mut()
        .for_each(|a| *a *= pg);
    Ok(out)
}

/// `-i H(t) psi` assembled from the ladder operators of the zone's mode.
fn jc_derivative(st: Strides, zone: &ZoneConfig, t: f64, psi: &[C64], out: &mut [C64]) {
    out.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
    let (dim, spectator) = st.mode_dims(zone.mode);
    let up = C64::from_polar(zone.g, zone.detuning * t); // g e^{i Delta t}
    let down = up.conj();
    for other in 0..spectator {
        for k in 0..dim {
            let ig = st.in_mode(zone.mode, Level::Ground, k, other);
            let ie = st.in_mode(zone.mode, Level::Excited, k, other);
            // |e><g| a : |g,k> -> sqrt(k) |e,k-1>
            if k >= 1 {
                let target = st.in_mode(zone.mode, Level::Excited, k - 1, other);
                out[target] += -I * up * (k as f64).sqrt() * psi[ig];
            }
            // a^dag |g><e| : |e,k> -> sqrt(k+1) |g,k+1>
            if k + 1 < dim {
                let target = st.in_mode(zone.mode, Level::Ground, k + 1, other);
                out[target] += -I * down * ((k + 1) as f64).sqrt() * psi[ie];
            }
        }
    }
}

/// Fixed-step RK4 integration of the zone Hamiltonian.
pub fn numeric_propagate(
    state: &JointState,
    zone: &ZoneConfig,
    steps: usize,
) -> Result<JointState> {
    zone.validate()?;
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    let st = Strides::of(state);
    let len = state.amplitudes().len();
    let h = zone.tau / steps as f64;
    let mut psi = state.amplitudes().to_vec();
    let mut k1 = vec![C64::new(0.0, 0.0); len];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();

    for step in 0..steps {
        let t = zone.start + step as f64 * h;
        jc_derivative(st, zone, t, &psi, &mut k1);
        axpy_into(&mut tmp, &psi, &k1, h / 2.0);
        jc_derivative(st, zone, t + h / 2.0, &tmp, &mut k2);
        axpy_into(&mut tmp, &psi, &k2, h / 2.0);
        jc_derivative(st, zone, t + h / 2.0, &tmp, &mut k3);
        axpy_into(&mut tmp, &psi, &k3, h);
        jc_derivative(st, zone, t + h, &tmp, &mut k4);
        for i in 0..len {
            psi[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
        }
    }
    Ok(JointState::from_raw(state.dims(), psi))
}

fn axpy_into(out: &mut [C64], x: &[C64], k: &[C64], a: f64) {
    for ((o, xi), ki) in out.iter_mut().zip(x).zip(k) {
        *o = xi + ki * a;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{AtomAmplitudes, ModeState, PureState, TwoModeState};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn basis(level: Level, n: usize, mu: usize, dims: (usize, usize)) -> JointState {
        JointState::from_field(
            &AtomAmplitudes::basis(level),
            &TwoModeState::fock(n, mu, dims).unwrap(),
        )
    }

    #[test]
    fn rabi_frequencies() {
        assert_eq!(rabi(0, 1.0, 0.0), 2.0);
        assert_eq!(rabi(5, 0.0, 5.0), 5.0);
        assert_eq!(rabi(3, 1.0, 0.0), 4.0);
        assert_eq!(rabi(-1, 1.0, -3.0), 3.0);
    }

    #[test]
    fn c_and_s_values() {
        assert_eq!(amp_c(2, 1.0, 0.3, 0.0), C64::new(1.0, 0.0));
        assert_eq!(amp_s(2, 1.0, 0.3, 0.0), C64::new(0.0, 0.0));
        let c = amp_c(0, 1.0, 0.0, FRAC_PI_2);
        assert!(c.norm() < 1e-15);
        let s = amp_s(0, 1.0, 0.0, FRAC_PI_2);
        assert_relative_eq!(s.im, 1.0, epsilon = 1e-15);
        // Omega = 2 sqrt 2, Omega tau / 2 = pi/4
        let omega = 2.0 * 2f64.sqrt();
        let tau = FRAC_PI_4 * 2.0 / omega;
        let c = amp_c(0, 1.0, 2.0, tau);
        assert_relative_eq!(c.re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_relative_eq!(c.im, 0.5, epsilon = 1e-15);
        // sector n = -1
        let c = amp_c(-1, 0.7, 1.3, 0.9);
        assert!((c - C64::from_polar(1.0, 1.3 * 0.9 / 2.0)).norm() < 1e-15);
        assert_eq!(amp_s(-1, 0.7, 1.3, 0.9), C64::new(0.0, 0.0));
        assert_eq!(amp_c(0, 0.0, 0.0, 3.0), C64::new(1.0, 0.0));
    }

    #[test]
    fn ground_vacuum_is_dark() {
        let dims = (3, 3);
        let psi = basis(Level::Ground, 0, 0, dims);
        let zone = ZoneConfig::new(0.8, 1.7, 2.5, 1).starting_at(0.4);
        let out = zone_propagate(&psi, &zone).unwrap();
        assert!((out.amp(Level::Ground, 0, 0) - C64::new(1.0, 0.0)).norm() < 1e-15);
        let num = numeric_propagate(&psi, &zone, 64).unwrap();
        assert!((num.amp(Level::Ground, 0, 0) - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pi_and_half_pi_pulses() {
        let dims = (3, 2);
        let psi = basis(Level::Excited, 0, 0, dims);
        let out = zone_propagate(&psi, &ZoneConfig::resonant(1, FRAC_PI_2)).unwrap();
        assert_relative_eq!(out.amp(Level::Ground, 1, 0).norm(), 1.0, epsilon = 1e-15);

        let out = zone_propagate(&psi, &ZoneConfig::resonant(1, FRAC_PI_4)).unwrap();
        let e = out.amp(Level::Excited, 0, 0);
        let g = out.amp(Level::Ground, 1, 0);
        assert_relative_eq!(e.re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_relative_eq!(g.im, -FRAC_1_SQRT_2, epsilon = 1e-15);
        let num =
            numeric_propagate(&psi, &ZoneConfig::resonant(1, FRAC_PI_4), DEFAULT_STEPS).unwrap();
        assert!((num.amp(Level::Ground, 1, 0) - g).norm() < 1e-12);
    }

    #[test]
    fn full_rabi_cycle_in_vacuum_sector() {
        let psi = basis(Level::Excited, 0, 0, (2, 2));
        let num = numeric_propagate(&psi, &ZoneConfig::resonant(1, PI), DEFAULT_STEPS).unwrap();
        assert!((num.amp(Level::Excited, 0, 0) + C64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn second_mode_zone() {
        let psi = basis(Level::Excited, 0, 0, (2, 2));
        let out = zone_propagate(&psi, &ZoneConfig::resonant(2, FRAC_PI_2)).unwrap();
        assert_relative_eq!(out.amp(Level::Ground, 0, 1).norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn overflow_is_reported() {
        let psi = basis(Level::Excited, 2, 0, (3, 2));
        let err = zone_propagate(&psi, &ZoneConfig::resonant(1, 1.0)).unwrap_err();
        assert_eq!(
            err,
            Error::TruncationOverflow {
                mode: 1,
                n: 2,
                dim: 3
            }
        );
        // the same level in the other mode is harmless
        assert!(zone_propagate(&psi, &ZoneConfig::resonant(2, 1.0)).is_ok());
    }

    #[test]
    fn gap_phases() {
        let f = TwoModeState::fock(1, 0, (2, 2)).unwrap();
        let psi = JointState::from_field(&AtomAmplitudes::balanced(), &f);
        let same = gap_propagate(&psi, &GapConfig::default()).unwrap();
        assert_eq!(same, psi);
        let flipped = gap_propagate(&psi, &GapConfig::new(0.0, PI, 0.0)).unwrap();
        assert_relative_eq!(
            flipped.amp(Level::Excited, 1, 0).re,
            -FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            flipped.amp(Level::Ground, 1, 0).re,
            FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn rejects_bad_configs() {
        let psi = basis(Level::Ground, 0, 0, (2, 2));
        assert!(zone_propagate(&psi, &ZoneConfig::new(1.0, -0.1, 0.0, 1)).is_err());
        assert!(zone_propagate(&psi, &ZoneConfig::new(-1.0, 0.1, 0.0, 1)).is_err());
        assert!(zone_propagate(&psi, &ZoneConfig::new(1.0, 0.1, 0.0, 3)).is_err());
        assert!(numeric_propagate(&psi, &ZoneConfig::resonant(1, 0.1), 0).is_err());
        assert!(gap_propagate(&psi, &GapConfig::new(-1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn coherent_field_norm_preserved() {
        let (m1, _) = ModeState::coherent(C64::new(1.2, 0.4), 32).unwrap();
        let (m2, _) = ModeState::coherent(C64::new(0.0, 0.9), 32).unwrap();
        let psi = JointState::tensor(&AtomAmplitudes::balanced(), &m1, &m2);
        let zone = ZoneConfig::new(1.0, 2.3, -0.7, 2).starting_at(1.1);
        let out = zone_propagate(&psi, &zone).unwrap();
        assert_relative_eq!(out.norm_sqr(), psi.norm_sqr(), epsilon = 1e-12);
    }
}
