use crate::{Error, Result, C64};

/// Tolerance on super-normalization of stored states.
pub const NORM_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Atomic level. `Ground` is index 0, `Excited` index 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    Ground,
    Excited,
}

impl Level {
    pub fn index(self) -> usize {
        match self {
            Level::Ground => 0,
            Level::Excited => 1,
        }
    }

    pub fn flip(self) -> Level {
        match self {
            Level::Ground => Level::Excited,
            Level::Excited => Level::Ground,
        }
    }
}

/// Amplitudes `c_g |g> + c_e |e>` of a two-level atom.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomAmplitudes {
    pub ground: C64,
    pub excited: C64,
}

impl AtomAmplitudes {
    /// Normalized input atom; rejects amplitudes off the unit sphere.
    pub fn new(ground: C64, excited: C64) -> Result<Self> {
        let norm = ground.norm_sqr() + excited.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { ground, excited })
    }

    pub fn ground() -> Self {
        Self {
            ground: ONE,
            excited: ZERO,
        }
    }

    pub fn excited() -> Self {
        Self {
            ground: ZERO,
            excited: ONE,
        }
    }

    pub fn basis(level: Level) -> Self {
        match level {
            Level::Ground => Self::ground(),
            Level::Excited => Self::excited(),
        }
    }

    /// `(|g> + |e>)/sqrt(2)`.
    pub fn balanced() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            ground: h,
            excited: h,
        }
    }

    pub fn amplitude(&self, level: Level) -> C64 {
        match level {
            Level::Ground => self.ground,
            Level::Excited => self.excited,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.ground.norm_sqr() + self.excited.norm_sqr()
    }
}

/// Common view of a pure state as a flat amplitude vector with a shape.
pub trait PureState {
    fn amplitudes(&self) -> &[C64];

    /// Subsystem dimensions, outermost first.
    fn shape(&self) -> Vec<usize>;

    fn norm_sqr(&self) -> f64 {
        self.amplitudes().iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    fn inner(&self, other: &Self) -> C64
    where
        Self: Sized,
    {
        self.amplitudes()
            .iter()
            .zip(other.amplitudes())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn check_norm(amps: &[C64]) -> Result<()> {
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if !norm.is_finite() || norm > 1.0 + NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

fn scaled(amps: &[C64], s: f64) -> Vec<C64> {
    amps.iter().map(|a| a * s).collect()
}

/// Truncated single-mode state over photon numbers `0..dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeState {
    amps: Vec<C64>,
}

impl ModeState {
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidParameter(
                "mode dimension must be >= 1".into(),
            ));
        }
        check_norm(&amps)?;
        Ok(Self { amps })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::fock(0, dim)
    }

    /// `|n>` in a space of `dim` levels.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::OutOfRange { n, dim });
        }
        let mut amps = vec![ZERO; dim];
        amps[n] = ONE;
        Ok(Self { amps })
    }

    /// Coherent state `|alpha>` truncated to `dim` levels and renormalized.
    ///
    /// Also returns the probability weight the untruncated state carries
    /// at `n >= dim`.
    pub fn coherent(alpha: C64, dim: usize) -> Result<(Self, f64)> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "mode dimension must be >= 1".into(),
            ));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(
                "coherent amplitude must be finite".into(),
            ));
        }
        let mean = alpha.norm_sqr();
        let envelope = (-mean / 2.0).exp();
        let mut amps = Vec::with_capacity(dim);
        // alpha^n / sqrt(n!) by recurrence
        let mut term = ONE;
        for n in 0..dim {
            if n > 0 {
                term = term * alpha / (n as f64).sqrt();
            }
            amps.push(term * envelope);
        }
        let kept: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let leakage = poisson_tail(mean, dim);
        let s = 1.0 / kept.sqrt();
        Ok((
            Self {
                amps: scaled(&amps, s),
            },
            leakage,
        ))
    }

    /// `(|0> + alpha|1>)/sqrt(1 + |alpha|^2)` padded to `dim >= 2` levels.
    pub fn zero_one(alpha: C64, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::OutOfRange { n: 1, dim });
        }
        let s = 1.0 / (1.0 + alpha.norm_sqr()).sqrt();
        let mut amps = vec![ZERO; dim];
        amps[0] = C64::new(s, 0.0);
        amps[1] = alpha * s;
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, n: usize) -> C64 {
        self.amps.get(n).copied().unwrap_or(ZERO)
    }

    pub fn photon_distribution(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }
}

impl PureState for ModeState {
    fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    fn shape(&self) -> Vec<usize> {
        vec![self.amps.len()]
    }
}

/// `P(N >= dim)` for a Poisson distribution of the given mean.
fn poisson_tail(mean: f64, dim: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    // Sum the tail directly: it stays accurate when the tail is tiny.
    let mut log_p = -mean;
    for k in 1..=dim {
        log_p += mean.ln() - (k as f64).ln();
    }
    let mut tail = 0.0;
    let mut p = log_p.exp();
    let mut k = dim;
    loop {
        tail += p;
        k += 1;
        p *= mean / k as f64;
        if p < tail * 1e-17 || p == 0.0 || k > dim + 100_000 {
            break;
        }
    }
    if tail > 1e-3 {
        // complementary sum is better conditioned here
        let mut head = 0.0;
        let mut q = (-mean).exp();
        for n in 0..dim {
            if n > 0 {
                q *= mean / n as f64;
            }
            head += q;
        }
        return (1.0 - head).max(0.0);
    }
    tail
}

/// Two-mode field state, amplitude index `(n, mu)` row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeState {
    dims: (usize, usize),
    amps: Vec<C64>,
}

impl TwoModeState {
    pub fn from_amplitudes(dims: (usize, usize), amps: Vec<C64>) -> Result<Self> {
        if dims.0 == 0 || dims.1 == 0 {
            return Err(Error::InvalidParameter(
                "mode dimensions must be >= 1".into(),
            ));
        }
        if amps.len() != dims.0 * dims.1 {
            return Err(Error::ShapeMismatch(format!(
                "{} amplitudes for dims {:?}",
                amps.len(),
                dims
            )));
        }
        check_norm(&amps)?;
        Ok(Self { dims, amps })
    }

    /// Builds a state from `(n, mu, amplitude)` triples, normalizing the result.
    pub fn from_components(
        dims: (usize, usize),
        components: &[(usize, usize, C64)],
    ) -> Result<Self> {
        let mut amps = vec![ZERO; dims.0 * dims.1];
        for &(n, mu, a) in components {
            if n >= dims.0 {
                return Err(Error::OutOfRange { n, dim: dims.0 });
            }
            if mu >= dims.1 {
                return Err(Error::OutOfRange { n: mu, dim: dims.1 });
            }
            amps[n * dims.1 + mu] += a;
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm < 1e-300 {
            return Err(Error::ZeroProbability { probability: norm });
        }
        let s = 1.0 / norm.sqrt();
        Self::from_amplitudes(dims, scaled(&amps, s))
    }

    pub(crate) fn from_raw(dims: (usize, usize), amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), dims.0 * dims.1);
        Self { dims, amps }
    }

    pub fn zeros(dims: (usize, usize)) -> Self {
        Self::from_raw(dims, vec![ZERO; dims.0 * dims.1])
    }

    pub fn product(m1: &ModeState, m2: &ModeState) -> Self {
        let dims = (m1.dim(), m2.dim());
        let mut amps = Vec::with_capacity(dims.0 * dims.1);
        for a in &m1.amps {
            for b in &m2.amps {
                amps.push(a * b);
            }
        }
        Self { dims, amps }
    }

    pub fn fock(n: usize, mu: usize, dims: (usize, usize)) -> Result<Self> {
        Ok(Self::product(
            &ModeState::fock(n, dims.0)?,
            &ModeState::fock(mu, dims.1)?,
        ))
    }

    pub fn vacuum(dims: (usize, usize)) -> Result<Self> {
        Self::fock(0, 0, dims)
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn amp(&self, n: usize, mu: usize) -> C64 {
        if n < self.dims.0 && mu < self.dims.1 {
            self.amps[n * self.dims.1 + mu]
        } else {
            ZERO
        }
    }

    /// Iterates `(n, mu, amplitude)` over all stored entries.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        let n2 = self.dims.1;
        self.amps
            .iter()
            .enumerate()
            .map(move |(i, a)| (i / n2, i % n2, *a))
    }

    /// Rescales to unit norm, returning the original norm squared.
    pub fn normalized(&self) -> Result<(f64, Self)> {
        let p = self.norm_sqr();
        if p < 1e-300 {
            return Err(Error::ZeroProbability { probability: p });
        }
        Ok((
            p,
            Self::from_raw(self.dims, scaled(&self.amps, 1.0 / p.sqrt())),
        ))
    }

    /// Applies `exp(i theta a2^dag a2)`, i.e. shifts the phase of the second mode.
    pub fn rotate_mode2(&self, theta: f64) -> Self {
        let out = self
            .iter()
            .map(|(_, mu, a)| a * C64::from_polar(1.0, theta * mu as f64))
            .collect();
        Self::from_raw(self.dims, out)
    }

    /// Embeds into larger truncations; errors if any dimension would shrink
    /// over an occupied level.
    pub fn resized(&self, dims: (usize, usize)) -> Result<Self> {
        let mut out = Self::zeros(dims);
        for (n, mu, a) in self.iter() {
            if a == ZERO {
                continue;
            }
            if n >= dims.0 {
                return Err(Error::OutOfRange { n, dim: dims.0 });
            }
            if mu >= dims.1 {
                return Err(Error::OutOfRange { n: mu, dim: dims.1 });
            }
            out.amps[n * dims.1 + mu] = a;
        }
        Ok(out)
    }

    /// `<a1^dag a2>`.
    pub fn cross_expectation(&self) -> C64 {
        let (n1, n2) = self.dims;
        let mut sum = ZERO;
        for n in 0..n1.saturating_sub(1) {
            for mu in 1..n2 {
                let w = ((n + 1) as f64 * mu as f64).sqrt();
                sum += self.amp(n + 1, mu - 1).conj() * self.amp(n, mu) * w;
            }
        }
        sum
    }

    /// `<a_k^dag a_k>` for mode 1 or 2.
    pub fn mean_photon_number(&self, mode: usize) -> f64 {
        self.iter()
            .map(|(n, mu, a)| {
                let k = if mode == 1 { n } else { mu };
                k as f64 * a.norm_sqr()
            })
            .sum()
    }
}

impl PureState for TwoModeState {
    fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    fn shape(&self) -> Vec<usize> {
        vec![self.dims.0, self.dims.1]
    }
}

/// Atom plus two cavity modes, amplitude index `(atom, n, mu)` row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    dims: (usize, usize),
    amps: Vec<C64>,
}

impl JointState {
    pub fn from_amplitudes(dims: (usize, usize), amps: Vec<C64>) -> Result<Self> {
        if dims.0 == 0 || dims.1 == 0 {
            return Err(Error::InvalidParameter(
                "mode dimensions must be >= 1".into(),
            ));
        }
        if amps.len() != 2 * dims.0 * dims.1 {
            return Err(Error::ShapeMismatch(format!(
                "{} amplitudes for joint dims (2, {}, {})",
                amps.len(),
                dims.0,
                dims.1
            )));
        }
        check_norm(&amps)?;
        Ok(Self { dims, amps })
    }

    pub(crate) fn from_raw(dims: (usize, usize), amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 2 * dims.0 * dims.1);
        Self { dims, amps }
    }

    pub fn tensor(atom: &AtomAmplitudes, m1: &ModeState, m2: &ModeState) -> Self {
        Self::from_field(atom, &TwoModeState::product(m1, m2))
    }

    pub fn from_field(atom: &AtomAmplitudes, field: &TwoModeState) -> Self {
        let mut amps = Vec::with_capacity(2 * field.amps.len());
        for c in [atom.ground, atom.excited] {
            amps.extend(field.amps.iter().map(|a| c * a));
        }
        Self {
            dims: field.dims,
            amps,
        }
    }

    /// Joins ground and excited field branches.
    pub fn from_branches(ground: &TwoModeState, excited: &TwoModeState) -> Result<Self> {
        if ground.dims != excited.dims {
            return Err(Error::ShapeMismatch("branch dimensions differ".into()));
        }
        let mut amps = ground.amps.clone();
        amps.extend_from_slice(&excited.amps);
        Ok(Self {
            dims: ground.dims,
            amps,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    fn offset(&self, level: Level) -> usize {
        level.index() * self.dims.0 * self.dims.1
    }

    pub fn amp(&self, level: Level, n: usize, mu: usize) -> C64 {
        if n < self.dims.0 && mu < self.dims.1 {
            self.amps[self.offset(level) + n * self.dims.1 + mu]
        } else {
            ZERO
        }
    }

    pub fn branch_amps(&self, level: Level) -> &[C64] {
        let len = self.dims.0 * self.dims.1;
        let o = self.offset(level);
        &self.amps[o..o + len]
    }

    pub(crate) fn branch_amps_mut(&mut self, level: Level) -> &mut [C64] {
        let len = self.dims.0 * self.dims.1;
        let o = self.offset(level);
        &mut self.amps[o..o + len]
    }

    /// Unnormalized field branch `<level|psi>`.
    pub fn project(&self, level: Level) -> TwoModeState {
        TwoModeState::from_raw(self.dims, self.branch_amps(level).to_vec())
    }

    /// Field branch `<c'|psi>` for a detection basis vector `c'`.
    pub fn project_onto(&self, basis: &AtomAmplitudes) -> TwoModeState {
        let cg = basis.ground.conj();
        let ce = basis.excited.conj();
        let amps = self
            .branch_amps(Level::Ground)
            .iter()
            .zip(self.branch_amps(Level::Excited))
            .map(|(g, e)| cg * g + ce * e)
            .collect();
        TwoModeState::from_raw(self.dims, amps)
    }

    pub fn level_probability(&self, level: Level) -> f64 {
        self.branch_amps(level).iter().map(|a| a.norm_sqr()).sum()
    }
}

impl PureState for JointState {
    fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    fn shape(&self) -> Vec<usize> {
        vec![2, self.dims.0, self.dims.1]
    }
}
