//! Atoms sent one after another through the same pair of cavities.
//!
//! Each detection collapses the field; the next atom sees the conditional
//! state. Probabilities are returned alongside renormalized field states.

use nalgebra::{DMatrix, DVector};

use crate::fock::{
    entropy, AtomAmplitudes, DensityMatrix, JointState, Level, PureState, TwoModeState,
};
use crate::jc::{GapConfig, ZoneConfig};
use crate::ramsey::{run_sequence, SequenceConfig};
use crate::{Error, Result, C64};

/// Branches below this weight are treated as impossible.
pub const MIN_PROBABILITY: f64 = 1e-14;

/// Field truncation used by the few-photon preparation protocols.
pub const PROTOCOL_DIMS: (usize, usize) = (4, 4);

/// One atom of a multi-atom experiment, with its own timings and phases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomRecord {
    pub input: AtomAmplitudes,
    pub seq: SequenceConfig,
    /// `None` leaves the atom unmeasured.
    pub outcome: Option<Level>,
}

impl AtomRecord {
    pub fn new(input: AtomAmplitudes, seq: SequenceConfig, outcome: Level) -> Self {
        Self {
            input,
            seq,
            outcome: Some(outcome),
        }
    }

    /// Atom prepared in `from` and detected in `to`.
    pub fn basis(from: Level, seq: SequenceConfig, to: Level) -> Self {
        Self::new(AtomAmplitudes::basis(from), seq, to)
    }
}

/// Result of sending one atom through the field.
#[derive(Clone, Debug, PartialEq)]
pub enum Transit {
    /// The atom was detected; the field is renormalized.
    Detected {
        probability: f64,
        field: TwoModeState,
    },
    /// The atom was not measured; atom and field stay entangled.
    Unmeasured(JointState),
}

/// Sends one atom through the cavities and applies its detection, if any.
pub fn send_and_measure(field: &TwoModeState, atom: &AtomRecord) -> Result<Transit> {
    let out = run_sequence(&atom.input, field, &atom.seq)?;
    let Some(level) = atom.outcome else {
        return Ok(Transit::Unmeasured(out));
    };
    let branch = out.project(level);
    let probability = branch.norm_sqr();
    if probability < MIN_PROBABILITY {
        return Err(Error::ZeroProbability { probability });
    }
    let (_, field) = branch.normalized()?;
    Ok(Transit::Detected { probability, field })
}

/// Like [`send_and_measure`] but insists on a detection.
pub fn detect(field: &TwoModeState, atom: &AtomRecord) -> Result<(f64, TwoModeState)> {
    match send_and_measure(field, atom)? {
        Transit::Detected { probability, field } => Ok((probability, field)),
        Transit::Unmeasured(_) => Err(Error::InvalidParameter(
            "atom has no measured outcome".into(),
        )),
    }
}

/// Unnormalized field branch after an atom is detected.
fn branch(field: &TwoModeState, atom: &AtomRecord) -> Result<TwoModeState> {
    let level = atom.outcome.ok_or_else(|| {
        Error::InvalidParameter("joint probability needs measured outcomes".into())
    })?;
    Ok(run_sequence(&atom.input, field, &atom.seq)?.project(level))
}

/// Probability of the recorded outcomes of a chain of atoms, by sequential
/// propagation. Impossible intermediate outcomes give 0.
pub fn joint_probability(field: &TwoModeState, atoms: &[AtomRecord]) -> Result<f64> {
    let mut psi = field.clone();
    for atom in atoms {
        psi = branch(&psi, atom)?;
    }
    Ok(psi.norm_sqr())
}

/// Closed-form probability that two atoms entering in `|g>` are both found
/// in `|e>` after passing a Fock field `|n, mu>`:
///
/// ```text
/// |S_{n-1} S'_{n-2} C*_mu C'*_mu|^2 + |C_{n-1} C'_{n-1} S_{mu-1} S'_{mu-2}|^2
///   + |S'_{n-1} C_{n-1} S_{mu-1} C'*_{mu-1}
///      + S_{n-1} C'_{n-2} S'_{mu-1} C*_mu e^{i(Delta(T'-T) + phi' - phi)}|^2
/// ```
///
/// Unprimed amplitudes use the first atom's zones, primed ones the second's.
pub fn joint_excite_fock(
    n: usize,
    mu: usize,
    first: &SequenceConfig,
    second: &SequenceConfig,
) -> Result<f64> {
    first.validate()?;
    second.validate()?;
    let (n, mu) = (n as i64, mu as i64);
    let (z1, z2) = (&first.zone1, &first.zone2);
    let (y1, y2) = (&second.zone1, &second.zone2);
    let d = first.detuning();
    let phase = C64::from_polar(
        1.0,
        d * (second.gap.t - first.gap.t) + second.phi() - first.phi(),
    );
    // amplitudes with negative lower index vanish unless they are C_{-1}
    let s = |z: &ZoneConfig, k: i64| if k < -1 { C64::new(0.0, 0.0) } else { z.s(k) };
    let c = |z: &ZoneConfig, k: i64| if k < -1 { C64::new(0.0, 0.0) } else { z.c(k) };
    let t1 = s(z1, n - 1) * s(y1, n - 2) * c(z2, mu).conj() * c(y2, mu).conj();
    let t2 = c(z1, n - 1) * c(y1, n - 1) * s(z2, mu - 1) * s(y2, mu - 2);
    let t3 = s(y1, n - 1) * c(z1, n - 1) * s(z2, mu - 1) * c(y2, mu - 1).conj()
        + s(z1, n - 1) * c(y1, n - 2) * s(y2, mu - 1) * c(z2, mu).conj() * phase;
    // a Fock level below zero cannot feed any path
    let valid = |ok: bool, v: C64| if ok { v.norm_sqr() } else { 0.0 };
    Ok(valid(n >= 2, t1) + valid(mu >= 2, t2) + valid(n >= 1 && mu >= 1, t3))
}

/// Resonant closed form for two atoms entering in `|e>` through an empty
/// pair of cavities, both found in `|g>`. Areas are `a_k = g_k tau_k` of
/// the first atom and `b_k` of the second; `psi = phi - phi'`.
///
/// ```text
/// sin^2 a1 sin^2(sqrt2 b1) + sin^2 a2 sin^2(sqrt2 b2) cos^2 a1 cos^2 b1
///   + |cos a1 sin b1 sin a2 cos b2 + sin a1 cos(sqrt2 b1) sin b2 e^{i psi}|^2
/// ```
pub fn both_excited_vacuum(a: (f64, f64), b: (f64, f64), psi: f64) -> f64 {
    let r2 = std::f64::consts::SQRT_2;
    let (a1, a2) = a;
    let (b1, b2) = b;
    let t1 = (a1.sin() * (r2 * b1).sin()).powi(2);
    let t2 = (a2.sin() * (r2 * b2).sin() * a1.cos() * b1.cos()).powi(2);
    let t3 = (C64::new(a1.cos() * b1.sin() * a2.sin() * b2.cos(), 0.0)
        + a1.sin() * (r2 * b1).cos() * b2.sin() * C64::from_polar(1.0, psi))
    .norm_sqr();
    t1 + t2 + t3
}

/// Constants printed in the literature for [`both_excited_vacuum`] at
/// `sqrt2 b1 = sqrt2 b2 = pi`, `a1 = a2 = pi/4`; the formula itself gives
/// `0.3746 + 0.2712 cos psi` there.
pub const BOTH_EXCITED_PRINTED: (f64, f64) = (0.4327, 0.3835);

/// Least-squares fit of `a + b cos x + c sin x`.
pub fn fit_cosine(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::ShapeMismatch(
            "cosine fit needs >= 3 paired samples".into(),
        ));
    }
    let m = DMatrix::from_fn(xs.len(), 3, |i, j| match j {
        0 => 1.0,
        1 => xs[i].cos(),
        _ => xs[i].sin(),
    });
    let y = DVector::from_column_slice(ys);
    let sol = m
        .svd(true, true)
        .solve(&y, 1e-12)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok((sol[0], sol[1], sol[2]))
}

/// Two atoms entering in `|e>` through vacuum, both detected in `|g>`.
/// The first atom uses areas `(area1, area2)`, the second `(pi, pi)`.
/// Returns the joint success probability and the normalized field, which is
/// `(|2,0> - e^{i Theta}|0,2>)/sqrt2` at `(pi/4, pi/2)`.
pub fn prepare_20_02(area1: f64, area2: f64, gaps: [GapConfig; 2]) -> Result<(f64, TwoModeState)> {
    let pi = std::f64::consts::PI;
    let vacuum = TwoModeState::vacuum(PROTOCOL_DIMS)?;
    let atoms = [
        AtomRecord::basis(
            Level::Excited,
            SequenceConfig::resonant(area1, area2, gaps[0]),
            Level::Ground,
        ),
        AtomRecord::basis(
            Level::Excited,
            SequenceConfig::resonant(pi, pi, gaps[1]),
            Level::Ground,
        ),
    ];
    conditioned(&vacuum, &atoms)
}

/// Third atom of the preparation chain: enters `|e>`, detected `|g>`, with
/// areas `(area1, area2)`; `(pi, pi)` turns the two-photon state into
/// `(|3,0> + e^{i Theta}|0,3>)/sqrt2`. The probability is relative to the
/// input field.
pub fn prepare_303(
    field: &TwoModeState,
    area1: f64,
    area2: f64,
    gap: GapConfig,
) -> Result<(f64, TwoModeState)> {
    let atom = AtomRecord::basis(
        Level::Excited,
        SequenceConfig::resonant(area1, area2, gap),
        Level::Ground,
    );
    conditioned(field, &[atom])
}

fn conditioned(field: &TwoModeState, atoms: &[AtomRecord]) -> Result<(f64, TwoModeState)> {
    let mut psi = field.clone();
    for atom in atoms {
        psi = branch(&psi, atom)?;
    }
    let p = psi.norm_sqr();
    if p < MIN_PROBABILITY {
        return Err(Error::ZeroProbability { probability: p });
    }
    let (_, state) = psi.normalized()?;
    Ok((p, state))
}

/// Two atoms together with the field they leave behind.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoAtomState {
    dims: (usize, usize),
    /// Field branches indexed by `2 * atom1 + atom2`.
    branches: [TwoModeState; 4],
}

impl TwoAtomState {
    fn slot(a1: Level, a2: Level) -> usize {
        2 * a1.index() + a2.index()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    /// Field branch with the atoms in `|a1, a2>`.
    pub fn branch(&self, a1: Level, a2: Level) -> &TwoModeState {
        &self.branches[Self::slot(a1, a2)]
    }

    pub fn amp(&self, a1: Level, a2: Level, n: usize, mu: usize) -> C64 {
        self.branch(a1, a2).amp(n, mu)
    }

    pub fn probability(&self, a1: Level, a2: Level) -> f64 {
        self.branch(a1, a2).norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.branches.iter().map(|b| b.norm_sqr()).sum()
    }

    /// Density matrix of the atom pair, basis order `gg, ge, eg, ee`.
    pub fn atom_density(&self) -> Result<DensityMatrix> {
        let mut m = DMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let bi = self.branches[i].amplitudes();
                let bj = self.branches[j].amplitudes();
                m[(i, j)] = bi.iter().zip(bj).map(|(a, b)| a * b.conj()).sum();
            }
        }
        DensityMatrix::new(vec![2, 2], m)
    }

    /// Von Neumann entropy of the first atom's reduced state.
    pub fn atom_entropy(&self) -> Result<f64> {
        entropy(&self.atom_density()?.partial_trace(&[0])?)
    }
}

/// Two atoms entering in `|g>` pass the field one after the other and are
/// left unmeasured.
pub fn transfer_entanglement(
    field: &TwoModeState,
    first: &SequenceConfig,
    second: &SequenceConfig,
) -> Result<TwoAtomState> {
    let after_first = run_sequence(&AtomAmplitudes::ground(), field, first)?;
    let mut branches: [TwoModeState; 4] =
        std::array::from_fn(|_| TwoModeState::zeros(field.dims()));
    for a1 in [Level::Ground, Level::Excited] {
        let sub = after_first.project(a1);
        let after_second = run_sequence(&AtomAmplitudes::ground(), &sub, second)?;
        for a2 in [Level::Ground, Level::Excited] {
            branches[TwoAtomState::slot(a1, a2)] = after_second.project(a2);
        }
    }
    Ok(TwoAtomState {
        dims: field.dims(),
        branches,
    })
}

/// `alpha|0,1> + beta|1,0>` on the protocol truncation.
pub fn single_photon_field(alpha: C64, beta: C64) -> Result<TwoModeState> {
    TwoModeState::from_components(PROTOCOL_DIMS, &[(0, 1, alpha), (1, 0, beta)])
}

/// Resonant one-photon amplitudes of the closed-form transfer result: with
/// the first atom at `g1 tau1 = pi/2` and the second at `(pi/2, pi/2)`, the
/// field ends in `|0,0>` and the atoms in
/// `-i(alpha sin x + beta cos x)|e,g> - i(alpha cos x - beta sin x)|g,e>`,
/// `x = g2 tau2`, all gap phases zero.
///
/// The minus sign in the `|g,e>` term is inherited from the
/// `(alpha cos x - beta sin x)|g,0,1>` amplitude left by the first atom.
pub fn transfer_closed_form(alpha: C64, beta: C64, x: f64) -> (C64, C64) {
    let mi = C64::new(0.0, -1.0);
    (
        mi * (alpha * x.sin() + beta * x.cos()),
        mi * (alpha * x.cos() - beta * x.sin()),
    )
}
