//! Far-detuned zones: the atom imprints level-dependent phases on the field
//! without exchanging photons.
//!
//! In zone `k` the levels shift by `+g_k^2 (n_k+1)/Delta` for `|e>` and
//! `-g_k^2 n_k/Delta` for `|g>`; outside the zones only the free energies
//! `(n+mu) omega +- omega0/2` act. After readout at time `tau` each basis
//! state carries
//!
//! ```text
//! |e,n,mu>: exp(-i[(n+mu) omega + omega0/2] tau - i g1^2 (n+1) tau1/Delta - i g2^2 (mu+1) tau2/Delta)
//! |g,n,mu>: exp(-i[(n+mu) omega - omega0/2] tau + i g1^2 n tau1/Delta + i g2^2 mu tau2/Delta)
//! ```

use crate::fock::{
    fidelity, AtomAmplitudes, JointState, Level, ModeState, PureState, TwoModeState,
};
use crate::{Error, Result, C64};

/// Dispersive two-cavity sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DispersiveConfig {
    pub g1: f64,
    pub g2: f64,
    pub detuning: f64,
    pub tau1: f64,
    pub tau2: f64,
    /// Free flight between the cavities.
    pub gap: f64,
    /// Field frequency.
    pub omega: f64,
    /// Atomic transition frequency.
    pub omega0: f64,
    /// Readout time, at or after the end of the second zone.
    pub tau: f64,
    /// Drop the free `omega`, `omega0` phases.
    pub interaction_frame: bool,
}

impl DispersiveConfig {
    /// Interaction-frame configuration with `g_k^2 tau_k / Delta = shift_k`.
    pub fn with_shifts(g: f64, detuning: f64, shift1: f64, shift2: f64) -> Self {
        let tau = |s: f64| s * detuning / (g * g);
        Self {
            g1: g,
            g2: g,
            detuning,
            tau1: tau(shift1),
            tau2: tau(shift2),
            gap: 0.0,
            omega: 0.0,
            omega0: 0.0,
            tau: tau(shift1) + tau(shift2),
            interaction_frame: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.g1,
            self.g2,
            self.detuning,
            self.tau1,
            self.tau2,
            self.gap,
            self.omega,
            self.omega0,
            self.tau,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "dispersive parameters must be finite".into(),
            ));
        }
        if self.detuning == 0.0 {
            return Err(Error::InvalidParameter(
                "dispersive coupling needs nonzero detuning".into(),
            ));
        }
        if self.g1 < 0.0 || self.g2 < 0.0 || self.tau1 < 0.0 || self.tau2 < 0.0 || self.gap < 0.0 {
            return Err(Error::InvalidParameter(
                "couplings and times must be >= 0".into(),
            ));
        }
        if !self.interaction_frame && self.tau < self.tau1 + self.gap + self.tau2 {
            return Err(Error::InvalidParameter(
                "readout time precedes the end of the second zone".into(),
            ));
        }
        Ok(())
    }

    /// Phase `g_k^2 tau_k / Delta` accumulated per photon in each cavity.
    pub fn shifts(&self) -> (f64, f64) {
        (
            self.g1 * self.g1 * self.tau1 / self.detuning,
            self.g2 * self.g2 * self.tau2 / self.detuning,
        )
    }

    /// Adiabatic-elimination diagnostic `max(g)^2 (n_max + 1) / Delta^2`; the
    /// effective Hamiltonian needs this well below 1.
    pub fn validity_ratio(&self, n_max: usize) -> f64 {
        let g = self.g1.max(self.g2);
        g * g * (n_max + 1) as f64 / (self.detuning * self.detuning)
    }

    fn free(&self) -> (f64, f64) {
        if self.interaction_frame {
            (0.0, 0.0)
        } else {
            (self.omega * self.tau, self.omega0 * self.tau)
        }
    }

    fn phase(&self, level: Level, n: usize, mu: usize) -> C64 {
        let (s1, s2) = self.shifts();
        let (wt, w0t) = self.free();
        let (n, mu) = (n as f64, mu as f64);
        let arg = match level {
            Level::Excited => -(n + mu) * wt - w0t / 2.0 - s1 * (n + 1.0) - s2 * (mu + 1.0),
            Level::Ground => -(n + mu) * wt + w0t / 2.0 + s1 * n + s2 * mu,
        };
        C64::from_polar(1.0, arg)
    }
}

/// Applies the diagonal dispersive evolution to every basis state.
pub fn dispersive_propagate(state: &JointState, cfg: &DispersiveConfig) -> Result<JointState> {
    cfg.validate()?;
    let (n1, n2) = state.dims();
    let mut out = state.clone();
    for level in [Level::Ground, Level::Excited] {
        let amps = out.branch_amps_mut(level);
        for n in 0..n1 {
            for mu in 0..n2 {
                amps[n * n2 + mu] *= cfg.phase(level, n, mu);
            }
        }
    }
    Ok(out)
}

/// Coherent pair `|alpha, beta>` on `dims`, each mode renormalized.
pub fn coherent_pair(alpha: C64, beta: C64, dims: (usize, usize)) -> Result<TwoModeState> {
    let (a, _) = ModeState::coherent(alpha, dims.0)?;
    let (b, _) = ModeState::coherent(beta, dims.1)?;
    Ok(TwoModeState::product(&a, &b))
}

/// Outcome of a conditional cat preparation.
#[derive(Clone, Debug, PartialEq)]
pub struct CatOutcome {
    pub probability: f64,
    pub field: TwoModeState,
}

/// Sends `atom_in` through coherent fields `|alpha>, |beta>`, then projects
/// the atom onto `detect = c'_g|g> + c'_e|e>`.
pub fn prepare_cat(
    alpha: C64,
    beta: C64,
    atom_in: &AtomAmplitudes,
    detect: &AtomAmplitudes,
    cfg: &DispersiveConfig,
    dims: (usize, usize),
) -> Result<CatOutcome> {
    let field = coherent_pair(alpha, beta, dims)?;
    let out = dispersive_propagate(&JointState::from_field(atom_in, &field), cfg)?;
    let branch = out.project_onto(detect);
    let probability = branch.norm_sqr();
    if probability < 1e-14 {
        return Err(Error::ZeroProbability { probability });
    }
    let (_, field) = branch.normalized()?;
    Ok(CatOutcome { probability, field })
}

/// The unnormalized field predicted by the compact coherent-state result:
/// `c'_g* c_g e^{i omega0 tau} |alpha0 e^{i s1}, beta0 e^{i s2}>
///  + c'_e* c_e e^{-i(s1+s2)} |alpha0 e^{-i s1}, beta0 e^{-i s2}>`,
/// with `alpha0 = alpha e^{-i omega tau}`, up to one global phase.
pub fn analytic_cat(
    alpha: C64,
    beta: C64,
    atom_in: &AtomAmplitudes,
    detect: &AtomAmplitudes,
    cfg: &DispersiveConfig,
    dims: (usize, usize),
) -> Result<TwoModeState> {
    cfg.validate()?;
    let (s1, s2) = cfg.shifts();
    let (wt, w0t) = cfg.free();
    let rot = C64::from_polar(1.0, -wt);
    let (a0, b0) = (alpha * rot, beta * rot);
    let up = coherent_pair(
        a0 * C64::from_polar(1.0, s1),
        b0 * C64::from_polar(1.0, s2),
        dims,
    )?;
    let down = coherent_pair(
        a0 * C64::from_polar(1.0, -s1),
        b0 * C64::from_polar(1.0, -s2),
        dims,
    )?;
    let wg = detect.ground.conj() * atom_in.ground * C64::from_polar(1.0, w0t);
    let we = detect.excited.conj() * atom_in.excited * C64::from_polar(1.0, -(s1 + s2));
    let amps = up
        .amplitudes()
        .iter()
        .zip(down.amplitudes())
        .map(|(u, d)| wg * u + we * d)
        .collect();
    TwoModeState::from_amplitudes(dims, amps)
}

/// Normalized `|alpha, beta> + sign e^{i phase} |-alpha, -beta>`.
pub fn entangled_coherent(
    alpha: C64,
    beta: C64,
    sign: f64,
    phase: f64,
    dims: (usize, usize),
) -> Result<TwoModeState> {
    let plus = coherent_pair(alpha, beta, dims)?;
    let minus = coherent_pair(-alpha, -beta, dims)?;
    let w = C64::from_polar(sign, phase);
    let amps = plus
        .amplitudes()
        .iter()
        .zip(minus.amplitudes())
        .map(|(p, m)| p + w * m)
        .collect();
    let raw = TwoModeState::from_raw(dims, amps);
    Ok(raw.normalized()?.1)
}

/// Fidelity of a prepared field with `|alpha, beta> + sign e^{i phase}|-alpha, -beta>`.
pub fn cat_fidelity(
    prepared: &TwoModeState,
    alpha: C64,
    beta: C64,
    sign: f64,
    phase: f64,
) -> Result<f64> {
    let ideal = entangled_coherent(alpha, beta, sign, phase, prepared.dims())?;
    fidelity(prepared, &ideal)
}
