//! Closed-form detection probabilities built from the `C_n`/`S_n` amplitudes.
//!
//! With the atom entering in `|g>`, the amplitude for ending in `|e,n,mu>` is
//! reached along two paths: absorb in cavity 1 (`X_{n+1,mu} = S_n* C_mu*`) or
//! absorb in cavity 2 (`Y_{n,mu+1} = C_{n-1} S_mu*`). The paths interfere
//! only through the field coherences `F_{n+1,mu} F*_{n,mu+1}`.

use super::SequenceConfig;
use crate::fock::{AtomAmplitudes, JointState, ModeState, TwoModeState};
use crate::jc::{gap_propagate, zone_propagate, GapConfig, ZoneConfig};
use crate::{Result, C64};

/// Threshold above which the interference sum counts as nonzero.
pub const FRINGE_THRESHOLD: f64 = 1e-12;

fn amp(field: &TwoModeState, n: i64, mu: i64) -> C64 {
    if n < 0 || mu < 0 {
        C64::new(0.0, 0.0)
    } else {
        field.amp(n as usize, mu as usize)
    }
}

/// `X_{n+1,mu} = S_n*(tau1) C_mu*(tau2)`.
fn path_x(seq: &SequenceConfig, n: i64, mu: i64) -> C64 {
    seq.zone1.s(n).conj() * seq.zone2.c(mu).conj()
}

/// `Y_{n,mu+1} = C_{n-1}(tau1) S_mu*(tau2)`.
fn path_y(seq: &SequenceConfig, n: i64, mu: i64) -> C64 {
    seq.zone1.c(n - 1) * seq.zone2.s(mu).conj()
}

/// `P_eg = sum |F_{n+1,mu} X_{n+1,mu} + e^{i(Delta T + phi)} F_{n,mu+1} Y_{n,mu+1}|^2`
/// for an atom entering in `|g>`.
pub fn prob_excite_closed_form(field: &TwoModeState, seq: &SequenceConfig) -> Result<f64> {
    seq.validate()?;
    let phase = C64::from_polar(1.0, seq.detuning() * seq.gap.t + seq.phi());
    let (n1, n2) = field.dims();
    let mut p = 0.0;
    for n in 0..n1 as i64 {
        for mu in 0..n2 as i64 {
            let a = amp(field, n + 1, mu) * path_x(seq, n, mu)
                + phase * amp(field, n, mu + 1) * path_y(seq, n, mu);
            p += a.norm_sqr();
        }
    }
    Ok(p)
}

/// Probability of ending in `|g>` for an atom entering in `|e>`:
/// `sum |F_{n-1,mu} X*_{n,mu-1} + e^{-i(Delta T + phi)} F_{n,mu-1} Y*_{n+1,mu}|^2`.
pub fn prob_deexcite_closed_form(field: &TwoModeState, seq: &SequenceConfig) -> Result<f64> {
    seq.validate()?;
    let phase = C64::from_polar(1.0, -(seq.detuning() * seq.gap.t + seq.phi()));
    let (n1, n2) = field.dims();
    let mut p = 0.0;
    // final photon numbers may sit one above the stored truncation
    for n in 0..=n1 as i64 {
        for mu in 0..=n2 as i64 {
            let x_conj = path_x(seq, n - 1, mu - 1).conj();
            let y_conj = path_y(seq, n + 1, mu - 1).conj();
            let a = amp(field, n - 1, mu) * x_conj + phase * amp(field, n, mu - 1) * y_conj;
            p += a.norm_sqr();
        }
    }
    Ok(p)
}

/// The phase-sensitive part of `P_eg`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterferenceReport {
    /// `sum F_{n+1,mu} F*_{n,mu+1} X_{n+1,mu} Y*_{n,mu+1}`.
    pub sum: C64,
    /// Whether `|sum|` exceeds [`FRINGE_THRESHOLD`].
    pub fringes: bool,
}

/// `P_eg = base + 2 Re(e^{-i(Delta T + phi)} sum)`; fringes need `sum != 0`.
pub fn interference_functional(
    field: &TwoModeState,
    seq: &SequenceConfig,
) -> Result<InterferenceReport> {
    seq.validate()?;
    let (n1, n2) = field.dims();
    let mut sum = C64::new(0.0, 0.0);
    for n in 0..n1 as i64 {
        for mu in 0..n2 as i64 {
            sum += amp(field, n + 1, mu)
                * amp(field, n, mu + 1).conj()
                * path_x(seq, n, mu)
                * path_y(seq, n, mu).conj();
        }
    }
    Ok(InterferenceReport {
        sum,
        fringes: sum.norm() > FRINGE_THRESHOLD,
    })
}

/// Resonant fringe for `(|0> + alpha|1>)` in each cavity, with pulse areas
/// `g1 tau1`, `g2 tau2`:
///
/// ```text
/// P_eg = |a|^2/(1+|a|^2)^2 |sin A1 cos A2 + sin A2 e^{i phi}|^2
///      + |a|^4/(1+|a|^2)^2 (sin^2 A1 cos^2(sqrt2 A2) + cos^2 A1 sin^2 A2)
/// ```
pub fn nonclassical_fringe(alpha: C64, area1: f64, area2: f64, phi: f64) -> f64 {
    let a2 = alpha.norm_sqr();
    let norm = (1.0 + a2).powi(2);
    let single = (C64::new(area1.sin() * area2.cos(), 0.0)
        + area2.sin() * C64::from_polar(1.0, phi))
    .norm_sqr();
    let double = area1.sin().powi(2) * (2f64.sqrt() * area2).cos().powi(2)
        + area1.cos().powi(2) * area2.sin().powi(2);
    a2 / norm * single + a2 * a2 / norm * double
}

/// Two zones inside one cavity; `|g>` picks up `e^{-i phi}` between them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleCavityConfig {
    pub g: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub detuning: f64,
    pub phi: f64,
}

/// `P_ge = sum_n |F_n S_n(tau1) C_n(tau2) e^{-i phi} + F_n C_n*(tau1) S_n(tau2)|^2`
/// for an atom entering in `|e>`.
pub fn single_cavity_prob(field: &ModeState, cfg: &SingleCavityConfig) -> f64 {
    let z1 = ZoneConfig::new(cfg.g, cfg.tau1, cfg.detuning, 1);
    let z2 = ZoneConfig::new(cfg.g, cfg.tau2, cfg.detuning, 1);
    let phase = C64::from_polar(1.0, -cfg.phi);
    (0..field.dim() as i64)
        .map(|n| {
            let f = field.amp(n as usize);
            (f * z1.s(n) * z2.c(n) * phase + f * z1.c(n).conj() * z2.s(n)).norm_sqr()
        })
        .sum()
}

/// Resonant, equal-time single-cavity result for a coherent field of mean
/// `nbar`, summed over `n < dim`:
/// `sum_n p_n sin^2(2 g sqrt(n+1) tau1) cos^2(phi/2)`.
pub fn single_cavity_coherent(nbar: f64, g: f64, tau1: f64, phi: f64, dim: usize) -> f64 {
    let mut p = (-nbar).exp();
    let mut sum = 0.0;
    for n in 0..dim {
        if n > 0 {
            p *= nbar / n as f64;
        }
        sum += p * (2.0 * g * ((n + 1) as f64).sqrt() * tau1).sin().powi(2);
    }
    sum * (cfg_phase(phi))
}

fn cfg_phase(phi: f64) -> f64 {
    (phi / 2.0).cos().powi(2)
}

/// Simulates the single-cavity sequence for an atom entering in `|e>`.
pub fn single_cavity_sequence(field: &ModeState, cfg: &SingleCavityConfig) -> Result<JointState> {
    let spectator = ModeState::vacuum(1)?;
    let psi = JointState::tensor(&AtomAmplitudes::excited(), field, &spectator);
    let z1 = ZoneConfig::new(cfg.g, cfg.tau1, cfg.detuning, 1);
    let z2 = ZoneConfig::new(cfg.g, cfg.tau2, cfg.detuning, 1).starting_at(cfg.tau1);
    let psi = zone_propagate(&psi, &z1)?;
    let psi = gap_propagate(&psi, &GapConfig::new(0.0, 0.0, cfg.phi))?;
    zone_propagate(&psi, &z2)
}
