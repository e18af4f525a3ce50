//! Fringe scans and visibility.

use rayon::prelude::*;

use super::{run_sequence, SequenceConfig};
use crate::fock::{AtomAmplitudes, Level, TwoModeState};
use crate::{Error, Result};

/// Curves whose samples all lie within this band count as flat.
const FLAT_TOL: f64 = 1e-15;

/// What the scan sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanVariable {
    /// Added to the gap phase `phi_e`.
    Phi,
    /// Product `Delta T`; the gap time becomes `T + x / Delta`.
    DeltaT,
    /// Extra phase on the second cavity field, `exp(i x a2^dag a2)`.
    Theta,
}

impl ScanVariable {
    pub fn name(self) -> &'static str {
        match self {
            ScanVariable::Phi => "phi",
            ScanVariable::DeltaT => "delta_t",
            ScanVariable::Theta => "theta",
        }
    }
}

/// A single-atom experiment whose detection probability is scanned.
#[derive(Clone, Debug, PartialEq)]
pub struct FringeScenario {
    pub atom: AtomAmplitudes,
    pub field: TwoModeState,
    pub seq: SequenceConfig,
    /// Level the atom is detected in.
    pub detect: Level,
}

impl FringeScenario {
    /// Detection probability with the scan variable set to `x`.
    pub fn evaluate(&self, variable: ScanVariable, x: f64) -> Result<f64> {
        let mut seq = self.seq;
        let rotated;
        let field = match variable {
            ScanVariable::Phi => {
                seq.gap.phi_e += x;
                &self.field
            }
            ScanVariable::DeltaT => {
                let d = seq.detuning();
                if d == 0.0 {
                    return Err(Error::InvalidParameter(
                        "a Delta T scan needs nonzero detuning".into(),
                    ));
                }
                seq.gap.t += x / d;
                if seq.gap.t < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "Delta T = {x} would need a negative gap time"
                    )));
                }
                &self.field
            }
            ScanVariable::Theta => {
                rotated = self.field.rotate_mode2(x);
                &rotated
            }
        };
        let out = run_sequence(&self.atom, field, &seq)?;
        Ok(out.level_probability(self.detect))
    }
}

/// Sampled probability curve.
#[derive(Clone, Debug, PartialEq)]
pub struct FringeCurve {
    pub variable: ScanVariable,
    pub detect: Level,
    pub samples: Vec<f64>,
    pub probabilities: Vec<f64>,
}

impl FringeCurve {
    pub fn visibility(&self) -> f64 {
        visibility(&self.probabilities)
    }

    pub fn max(&self) -> f64 {
        self.probabilities
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.probabilities
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// `points` samples over the closed-open interval `[start, stop)`.
pub fn uniform_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    let step = (stop - start) / points as f64;
    (0..points).map(|k| start + step * k as f64).collect()
}

/// Evaluates the scenario over `grid`, in parallel on the current rayon
/// pool. The output order follows the grid regardless of scheduling.
pub fn fringe_scan(
    scenario: &FringeScenario,
    variable: ScanVariable,
    grid: &[f64],
) -> Result<FringeCurve> {
    if grid.len() < 2 {
        return Err(Error::InvalidParameter(
            "a scan needs at least 2 points".into(),
        ));
    }
    scenario.seq.validate()?;
    let probabilities = grid
        .par_iter()
        .map(|&x| scenario.evaluate(variable, x))
        .collect::<Result<Vec<f64>>>()?;
    Ok(FringeCurve {
        variable,
        detect: scenario.detect,
        samples: grid.to_vec(),
        probabilities,
    })
}

/// `(max - min) / (max + min)` over the samples; 0 for a flat or empty curve.
pub fn visibility(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if values.is_empty() || max - min <= FLAT_TOL || max + min <= 0.0 {
        0.0
    } else {
        (max - min) / (max + min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ModeState;
    use crate::jc::GapConfig;
    use crate::C64;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};

    #[test]
    fn visibility_basics() {
        assert_eq!(visibility(&[0.3; 10]), 0.0);
        assert_eq!(visibility(&[0.0; 4]), 0.0);
        let grid = uniform_grid(0.0, TAU, 64);
        let curve: Vec<f64> = grid.iter().map(|x| 2.0 + x.cos()).collect();
        assert!((visibility(&curve) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn grid_is_closed_open() {
        let g = uniform_grid(0.0, TAU, 4);
        assert_eq!(g, vec![0.0, FRAC_PI_2, PI, 1.5 * PI]);
    }

    #[test]
    fn too_few_points() {
        let sc = FringeScenario {
            atom: AtomAmplitudes::ground(),
            field: TwoModeState::vacuum((2, 2)).unwrap(),
            seq: SequenceConfig::resonant(1.0, 1.0, GapConfig::default()),
            detect: Level::Excited,
        };
        assert!(fringe_scan(&sc, ScanVariable::Phi, &[0.0]).is_err());
        assert!(fringe_scan(&sc, ScanVariable::DeltaT, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn phi_theta_and_delta_t_scans_agree() {
        // theta enters only through theta + phi; Delta T only through Delta T + phi
        let m = ModeState::zero_one(C64::new(0.7, 0.0), 3).unwrap();
        let field = TwoModeState::product(&m, &m);
        let mut sc = FringeScenario {
            atom: AtomAmplitudes::ground(),
            field,
            seq: SequenceConfig::new(
                1.0,
                FRAC_PI_2,
                1.0,
                FRAC_PI_2 / SQRT_2,
                0.0,
                GapConfig::default(),
            ),
            detect: Level::Excited,
        };
        let grid = uniform_grid(0.0, TAU, 16);
        let phi = fringe_scan(&sc, ScanVariable::Phi, &grid).unwrap();
        let theta = fringe_scan(&sc, ScanVariable::Theta, &grid).unwrap();
        for (a, b) in phi.probabilities.iter().zip(&theta.probabilities) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((phi.visibility() - (PI / SQRT_2).sin()).abs() < 1e-12);

        sc.seq = SequenceConfig::new(1.0, 0.9, 1.0, 0.4, 0.5, GapConfig::default());
        let phi = fringe_scan(&sc, ScanVariable::Phi, &grid).unwrap();
        let dt = fringe_scan(&sc, ScanVariable::DeltaT, &grid).unwrap();
        for (a, b) in phi.probabilities.iter().zip(&dt.probabilities) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
