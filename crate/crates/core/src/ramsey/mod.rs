//! Two-zone Ramsey sequences with quantized fields.
//!
//! Zone 1 couples the atom to cavity mode 1 during `[0, tau1]`, the atom then
//! flies freely for `T` picking up the level phases `phi_e`, `phi_g`, and zone
//! 2 couples it to mode 2 during `[tau1 + T, tau1 + T + tau2]`.

mod classical;
mod closed_form;
mod scan;

pub use classical::{classical_prob, classical_weak_limit, ClassicalRamsey, RabiMapping};
pub use closed_form::{
    interference_functional, nonclassical_fringe, prob_deexcite_closed_form,
    prob_excite_closed_form, single_cavity_coherent, single_cavity_prob, single_cavity_sequence,
    InterferenceReport, SingleCavityConfig, FRINGE_THRESHOLD,
};
pub use scan::{fringe_scan, uniform_grid, visibility, FringeCurve, FringeScenario, ScanVariable};

use crate::fock::{AtomAmplitudes, JointState, Level, TwoModeState};
use crate::jc::{gap_propagate, zone_propagate, GapConfig, ZoneConfig};
use crate::{Error, Result};

/// Zone 1 on mode 1, a free gap, zone 2 on mode 2, sharing one detuning.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SequenceConfig {
    pub zone1: ZoneConfig,
    pub gap: GapConfig,
    pub zone2: ZoneConfig,
}

impl SequenceConfig {
    pub fn new(g1: f64, tau1: f64, g2: f64, tau2: f64, detuning: f64, gap: GapConfig) -> Self {
        Self {
            zone1: ZoneConfig::new(g1, tau1, detuning, 1),
            gap,
            zone2: ZoneConfig::new(g2, tau2, detuning, 2),
        }
    }

    /// Resonant sequence with unit couplings; `area1`, `area2` are `g tau`.
    pub fn resonant(area1: f64, area2: f64, gap: GapConfig) -> Self {
        Self::new(1.0, area1, 1.0, area2, 0.0, gap)
    }

    pub fn detuning(&self) -> f64 {
        self.zone1.detuning
    }

    /// Relative gap phase `phi_e - phi_g`.
    pub fn phi(&self) -> f64 {
        self.gap.phi_e - self.gap.phi_g
    }

    pub fn validate(&self) -> Result<()> {
        self.zone1.validate()?;
        self.zone2.validate()?;
        self.gap.validate()?;
        if self.zone1.mode != 1 || self.zone2.mode != 2 {
            return Err(Error::InvalidParameter(
                "sequence needs zone1 on mode 1 and zone2 on mode 2".into(),
            ));
        }
        if self.zone1.detuning != self.zone2.detuning {
            return Err(Error::InvalidParameter(
                "both cavities must share one detuning".into(),
            ));
        }
        Ok(())
    }

    /// The two zones placed on the sequence clock.
    pub fn timed_zones(&self) -> (ZoneConfig, ZoneConfig) {
        let z1 = self.zone1.starting_at(0.0);
        let z2 = self.zone2.starting_at(self.zone1.tau + self.gap.t);
        (z1, z2)
    }
}

/// Propagates an atom-field product state through the whole sequence.
pub fn run_sequence(
    atom: &AtomAmplitudes,
    field: &TwoModeState,
    seq: &SequenceConfig,
) -> Result<JointState> {
    run_joint(&JointState::from_field(atom, field), seq)
}

/// Same as [`run_sequence`] for an arbitrary (possibly entangled) input.
pub fn run_joint(state: &JointState, seq: &SequenceConfig) -> Result<JointState> {
    seq.validate()?;
    let (z1, z2) = seq.timed_zones();
    let psi = zone_propagate(state, &z1)?;
    let psi = gap_propagate(&psi, &seq.gap)?;
    zone_propagate(&psi, &z2)
}

/// Probability of finding the atom in `|e>`.
pub fn prob_excite(state: &JointState) -> f64 {
    state.level_probability(Level::Excited)
}

/// Probability of finding the atom in `|g>`.
pub fn prob_deexcite(state: &JointState) -> f64 {
    state.level_probability(Level::Ground)
}
