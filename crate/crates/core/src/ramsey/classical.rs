//! Ramsey sequence driven by classical fields.
//!
//! Each zone is the two-level Hamiltonian
//! `H = G (|e><g| e^{i(theta_k + Delta t)} + h.c.)` with `G = Omega_R / 2`,
//! placed on the same clock as the quantized sequence so the two can be
//! compared term by term in the large-field limit.

use crate::fock::{AtomAmplitudes, Level};
use crate::jc::{amp_c, amp_s, GapConfig};
use crate::{Error, Result, C64};

/// Maps a coherent amplitude onto a classical Rabi frequency,
/// `Omega_R = factor * g * |alpha|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RabiMapping {
    pub factor: f64,
}

impl Default for RabiMapping {
    fn default() -> Self {
        Self { factor: 2.0 }
    }
}

impl RabiMapping {
    pub fn rabi(&self, g: f64, alpha_abs: f64) -> f64 {
        self.factor * g * alpha_abs
    }
}

/// Two classical zones of equal Rabi frequency; zone 2's field carries the
/// relative phase `theta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalRamsey {
    pub rabi: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub gap: GapConfig,
    pub detuning: f64,
    pub theta: f64,
}

impl ClassicalRamsey {
    pub fn validate(&self) -> Result<()> {
        self.gap.validate()?;
        let vals = [self.rabi, self.tau1, self.tau2, self.detuning, self.theta];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "classical parameters must be finite".into(),
            ));
        }
        if self.rabi < 0.0 || self.tau1 < 0.0 || self.tau2 < 0.0 {
            return Err(Error::InvalidParameter(
                "rabi frequency and times must be >= 0".into(),
            ));
        }
        Ok(())
    }

    fn pulse(&self, atom: AtomAmplitudes, tau: f64, start: f64, theta: f64) -> AtomAmplitudes {
        let g = self.rabi / 2.0;
        let d = self.detuning;
        let c = amp_c(0, g, d, tau);
        let s = amp_s(0, g, d, tau);
        let fwd = C64::from_polar(1.0, d * tau / 2.0);
        let entry = C64::from_polar(1.0, d * start + theta);
        let (ce, cg) = (atom.excited, atom.ground);
        AtomAmplitudes {
            excited: fwd * (c.conj() * ce - s * entry * cg),
            ground: fwd.conj() * (-s * entry.conj() * ce + c * cg),
        }
    }

    /// Final atomic amplitudes.
    pub fn evolve(&self, atom: &AtomAmplitudes) -> Result<AtomAmplitudes> {
        self.validate()?;
        let a = self.pulse(*atom, self.tau1, 0.0, 0.0);
        let a = AtomAmplitudes {
            excited: a.excited * C64::from_polar(1.0, -self.gap.phi_e),
            ground: a.ground * C64::from_polar(1.0, -self.gap.phi_g),
        };
        Ok(self.pulse(a, self.tau2, self.tau1 + self.gap.t, self.theta))
    }

    /// `P_eg`: atom enters in `|g>`, detected in `|e>`.
    pub fn prob_excite(&self) -> Result<f64> {
        Ok(self
            .evolve(&AtomAmplitudes::ground())?
            .amplitude(Level::Excited)
            .norm_sqr())
    }

    /// `P_ge`: atom enters in `|e>`, detected in `|g>`.
    pub fn prob_deexcite(&self) -> Result<f64> {
        Ok(self
            .evolve(&AtomAmplitudes::excited())?
            .amplitude(Level::Ground)
            .norm_sqr())
    }
}

/// Classical `P_eg` with no free-flight time and relative gap phase `phi`.
///
/// On resonance this is `|sin a1 cos a2 + cos a1 sin a2 e^{i(theta+phi)}|^2`
/// with `a_k = Omega_R tau_k / 2`.
pub fn classical_prob(
    rabi: f64,
    tau1: f64,
    tau2: f64,
    theta: f64,
    phi: f64,
    detuning: f64,
) -> Result<f64> {
    ClassicalRamsey {
        rabi,
        tau1,
        tau2,
        gap: GapConfig::with_phase(0.0, phi),
        detuning,
        theta,
    }
    .prob_excite()
}

/// Small-field classical fringe at `g tau1 = sqrt2 g tau2 = pi/2`:
/// `(|alpha|^2 pi^2 / 4)(3/2 + sqrt2 cos psi)`.
pub fn classical_weak_limit(alpha_abs: f64, psi: f64) -> f64 {
    let pre = alpha_abs * alpha_abs * std::f64::consts::PI.powi(2) / 4.0;
    pre * (1.5 + std::f64::consts::SQRT_2 * psi.cos())
}
