//! Zero-temperature cavity damping between atomic transits.
//!
//! The field obeys
//! `d rho/dt = -sum_i kappa_i (a_i^dag a_i rho - 2 a_i rho a_i^dag + rho a_i^dag a_i)`,
//! so `2 kappa_i` is the photon loss rate of cavity `i`.

use nalgebra::DMatrix;

use crate::fock::{DensityMatrix, PureState, TwoModeState};
use crate::{Error, Result, C64};

/// Damping rates and elapsed time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayConfig {
    pub kappa1: f64,
    pub kappa2: f64,
    pub t: f64,
}

impl DecayConfig {
    pub fn new(kappa1: f64, kappa2: f64, t: f64) -> Self {
        Self { kappa1, kappa2, t }
    }

    pub fn at_time(self, t: f64) -> Self {
        Self { t, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let v = [self.kappa1, self.kappa2, self.t];
        if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "decay rates and time must be finite and >= 0, got {v:?}"
            )));
        }
        Ok(())
    }

    /// `max(100, ceil(200 kappa_max t))` RK4 steps.
    pub fn default_steps(&self) -> usize {
        let k = self.kappa1.max(self.kappa2);
        ((200.0 * k * self.t).ceil() as usize).max(100)
    }
}

/// One damping channel: photon count of its mode per basis index, and the
/// index stride of that mode.
struct Channel {
    kappa: f64,
    counts: Vec<usize>,
    stride: usize,
    dim: usize,
}

/// The Lindblad generator applied elementwise, using that `a^dag a` is
/// diagonal and `a rho a^dag` only shifts both indices by one photon.
struct Generator {
    channels: Vec<Channel>,
}

impl Generator {
    fn new(dims: &[usize], kappas: &[f64]) -> Self {
        let d: usize = dims.iter().product();
        let channels = kappas
            .iter()
            .enumerate()
            .filter(|(_, k)| **k > 0.0)
            .map(|(i, &kappa)| {
                let stride: usize = dims[i + 1..].iter().product();
                let counts = (0..d).map(|idx| (idx / stride) % dims[i]).collect();
                Channel {
                    kappa,
                    counts,
                    stride,
                    dim: dims[i],
                }
            })
            .collect();
        Self { channels }
    }

    fn apply(&self, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        out.fill(C64::new(0.0, 0.0));
        let d = rho.nrows();
        for ch in &self.channels {
            for j in 0..d {
                let kj = ch.counts[j];
                for i in 0..d {
                    let ki = ch.counts[i];
                    let mut v = -rho[(i, j)] * (ki + kj) as f64;
                    if ki + 1 < ch.dim && kj + 1 < ch.dim {
                        let w = 2.0 * (((ki + 1) * (kj + 1)) as f64).sqrt();
                        v += rho[(i + ch.stride, j + ch.stride)] * w;
                    }
                    out[(i, j)] += v * ch.kappa;
                }
            }
        }
    }
}

/// Integrates the master equation with fixed-step RK4.
///
/// `rho0` lives on one mode (rate `kappa1`) or on two modes.
pub fn lindblad_evolve(
    rho0: &DensityMatrix,
    cfg: &DecayConfig,
    steps: usize,
) -> Result<DensityMatrix> {
    cfg.validate()?;
    rho0.validate()?;
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    let dims = rho0.dims().to_vec();
    let kappas: &[f64] = match dims.len() {
        1 => &[cfg.kappa1][..],
        2 => &[cfg.kappa1, cfg.kappa2][..],
        n => {
            return Err(Error::ShapeMismatch(format!(
                "damping acts on one or two modes, got {n} subsystems"
            )))
        }
    };
    let gen = Generator::new(&dims, kappas);
    let h = cfg.t / steps as f64;
    let mut rho = rho0.matrix().clone();
    let n = rho.nrows();
    let zero = || DMatrix::<C64>::zeros(n, n);
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (zero(), zero(), zero(), zero(), zero());
    for _ in 0..steps {
        gen.apply(&rho, &mut k1);
        tmp.zip_zip_apply(&rho, &k1, |t, r, k| *t = r + k * (h / 2.0));
        gen.apply(&tmp, &mut k2);
        tmp.zip_zip_apply(&rho, &k2, |t, r, k| *t = r + k * (h / 2.0));
        gen.apply(&tmp, &mut k3);
        tmp.zip_zip_apply(&rho, &k3, |t, r, k| *t = r + k * h);
        gen.apply(&tmp, &mut k4);
        for idx in 0..n * n {
            rho[idx] += (k1[idx] + k2[idx] * 2.0 + k3[idx] * 2.0 + k4[idx]) * (h / 6.0);
        }
    }
    DensityMatrix::new(dims, rho)
}

/// [`lindblad_evolve`] with [`DecayConfig::default_steps`].
pub fn lindblad_evolve_default(rho0: &DensityMatrix, cfg: &DecayConfig) -> Result<DensityMatrix> {
    lindblad_evolve(rho0, cfg, cfg.default_steps())
}

/// The one-photon field `-(i/sqrt2)(|1,0> + |0,1>)` left by the first atom.
pub fn bell_field(dims: (usize, usize)) -> Result<TwoModeState> {
    let h = C64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2);
    TwoModeState::from_components(dims, &[(1, 0, h), (0, 1, h)])
}

/// Closed-form decay of [`bell_field`]:
/// `|psi_t><psi_t| + (1 - (e^{-2 kappa1 t} + e^{-2 kappa2 t})/2)|0,0><0,0|`,
/// `psi_t = -(i/sqrt2)(e^{-kappa1 t}|1,0> + e^{-kappa2 t}|0,1>)`.
pub fn analytic_decay(cfg: &DecayConfig, dims: (usize, usize)) -> Result<DensityMatrix> {
    cfg.validate()?;
    if dims.0 < 2 || dims.1 < 2 {
        return Err(Error::OutOfRange {
            n: 1,
            dim: dims.0.min(dims.1),
        });
    }
    let d = dims.0 * dims.1;
    let (e1, e2) = ((-cfg.kappa1 * cfg.t).exp(), (-cfg.kappa2 * cfg.t).exp());
    let h = C64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2);
    let mut psi = vec![C64::new(0.0, 0.0); d];
    psi[dims.1] = h * e1; // |1,0>
    psi[1] = h * e2; // |0,1>
    let mut m = DMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj());
    m[(0, 0)] += C64::new(1.0 - 0.5 * (e1 * e1 + e2 * e2), 0.0);
    DensityMatrix::new(vec![dims.0, dims.1], m)
}

/// Overlap `<psi_1|rho(tau0)|psi_1>` of the decayed field with the ideal
/// one-photon state, `((e^{-kappa1 tau0} + e^{-kappa2 tau0})/2)^2`.
pub fn protocol_fidelity_under_decay(tau0: f64, cfg: &DecayConfig) -> Result<f64> {
    let cfg = cfg.at_time(tau0);
    let dims = (2, 2);
    let rho = analytic_decay(&cfg, dims)?;
    let ideal = bell_field(dims)?;
    Ok(rho.expectation_pure(ideal.amplitudes())?.re)
}

/// `Tr(rho a_k^dag a_k)` for mode `which` (0-based).
pub fn mean_photon_number(rho: &DensityMatrix, which: usize) -> Result<f64> {
    let dims = rho.dims();
    if which >= dims.len() {
        return Err(Error::InvalidSelector(format!(
            "mode {which} of {} modes",
            dims.len()
        )));
    }
    let stride: usize = dims[which + 1..].iter().product();
    Ok((0..rho.dim())
        .map(|i| ((i / stride) % dims[which]) as f64 * rho.get(i, i).re)
        .sum())
}
