use nalgebra::{DMatrix, SymmetricEigen};

use super::state::{JointState, PureState, TwoModeState};
use crate::{Error, Result, C64};

/// Eigenvalues below this floor are dropped from the entropy sum.
pub const EIGEN_FLOOR: f64 = 1e-14;

/// Density matrix over a tensor product of subsystems.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: DMatrix<C64>,
}

impl DensityMatrix {
    /// Wraps a matrix, checking Hermiticity, trace and positivity.
    pub fn new(dims: Vec<usize>, mat: DMatrix<C64>) -> Result<Self> {
        let rho = Self::from_raw(dims, mat)?;
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_raw(dims: Vec<usize>, mat: DMatrix<C64>) -> Result<Self> {
        let d: usize = dims.iter().product();
        if dims.is_empty() || d == 0 || mat.nrows() != d || mat.ncols() != d {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix for dims {:?}",
                mat.nrows(),
                mat.ncols(),
                dims
            )));
        }
        Ok(Self { dims, mat })
    }

    /// `|psi><psi|` for a flat amplitude vector.
    pub fn pure(dims: Vec<usize>, amps: &[C64]) -> Result<Self> {
        let d = amps.len();
        let mat = DMatrix::from_fn(d, d, |i, j| amps[i] * amps[j].conj());
        Self::from_raw(dims, mat)
    }

    pub fn from_state<S: PureState>(state: &S) -> Result<Self> {
        Self::pure(state.shape(), state.amplitudes())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in i..d {
                if (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm() > 1e-10 {
                    return Err(Error::InvalidParameter(format!(
                        "density matrix not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        let tr = self.trace();
        if !(-1e-10..=1.0 + 1e-10).contains(&tr) {
            return Err(Error::NotNormalized(tr));
        }
        if let Some(&min) = self.eigenvalues().first() {
            if min < -1e-10 {
                return Err(Error::InvalidParameter(format!(
                    "density matrix has negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(())
    }

    /// Von Neumann entropy in nats.
    pub fn entropy(&self) -> Result<f64> {
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(tr));
        }
        Ok(self
            .eigenvalues()
            .into_iter()
            .filter(|&l| l >= EIGEN_FLOOR)
            .map(|l| -l * l.ln())
            .sum())
    }

    /// `<psi|rho|psi>` for a flat amplitude vector of matching length.
    pub fn expectation_pure(&self, amps: &[C64]) -> Result<C64> {
        if amps.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "state of length {} against {}-dimensional density matrix",
                amps.len(),
                self.dim()
            )));
        }
        let mut sum = C64::new(0.0, 0.0);
        for (i, a) in amps.iter().enumerate() {
            for (j, b) in amps.iter().enumerate() {
                sum += a.conj() * self.mat[(i, j)] * b;
            }
        }
        Ok(sum)
    }

    /// Reduced state on the subsystems listed in `keep` (in ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let layout = Layout::new(&self.dims, keep)?;
        let kd = layout.keep_dim;
        let mut out = DMatrix::from_element(kd, kd, C64::new(0.0, 0.0));
        for t in 0..layout.trace_dim {
            for a in 0..kd {
                let i = layout.index(a, t);
                for b in 0..kd {
                    out[(a, b)] += self.mat[(i, layout.index(b, t))];
                }
            }
        }
        DensityMatrix::from_raw(layout.keep_dims, out)
    }
}

/// Splits flat indices over `dims` into kept and traced multi-indices.
struct Layout {
    dims: Vec<usize>,
    keep: Vec<usize>,
    traced: Vec<usize>,
    keep_dims: Vec<usize>,
    keep_dim: usize,
    trace_dim: usize,
}

impl Layout {
    fn new(dims: &[usize], keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidSelector("nothing to keep".into()));
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSelector(format!(
                "subsystem list {keep:?} must be strictly ascending"
            )));
        }
        if let Some(&k) = keep.iter().find(|&&k| k >= dims.len()) {
            return Err(Error::InvalidSelector(format!(
                "subsystem {k} does not exist among {} subsystems",
                dims.len()
            )));
        }
        let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
        let keep_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
        Ok(Self {
            dims: dims.to_vec(),
            keep: keep.to_vec(),
            keep_dim: keep_dims.iter().product(),
            trace_dim: traced.iter().map(|&k| dims[k]).product(),
            traced,
            keep_dims,
        })
    }

    /// Flat index for kept index `a` and traced index `t`.
    fn index(&self, a: usize, t: usize) -> usize {
        let mut digits = vec![0; self.dims.len()];
        let mut rem = a;
        for &k in self.keep.iter().rev() {
            digits[k] = rem % self.dims[k];
            rem /= self.dims[k];
        }
        let mut rem = t;
        for &k in self.traced.iter().rev() {
            digits[k] = rem % self.dims[k];
            rem /= self.dims[k];
        }
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&d, &n)| acc * n + d)
    }
}

/// Reduced state of a flat pure-state vector, without forming `|psi><psi|`.
pub(crate) fn reduce_pure(dims: &[usize], amps: &[C64], keep: &[usize]) -> Result<DensityMatrix> {
    let layout = Layout::new(dims, keep)?;
    let kd = layout.keep_dim;
    let td = layout.trace_dim;
    let m = DMatrix::from_fn(kd, td, |a, t| amps[layout.index(a, t)]);
    let rho = &m * m.adjoint();
    DensityMatrix::from_raw(layout.keep_dims, rho)
}

/// Subsystem selector for reduced states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    Atom,
    Mode1,
    Mode2,
    /// Both cavity modes together.
    Modes,
}

/// States that can be reduced to a subsystem.
pub trait Reducible {
    fn reduce(&self, keep: Subsystem) -> Result<DensityMatrix>;
}

impl Reducible for JointState {
    fn reduce(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let idx: &[usize] = match keep {
            Subsystem::Atom => &[0],
            Subsystem::Mode1 => &[1],
            Subsystem::Mode2 => &[2],
            Subsystem::Modes => &[1, 2],
        };
        reduce_pure(&self.shape(), self.amplitudes(), idx)
    }
}

impl Reducible for TwoModeState {
    fn reduce(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let idx: &[usize] = match keep {
            Subsystem::Atom => {
                return Err(Error::InvalidSelector("field state has no atom".into()))
            }
            Subsystem::Mode1 => &[0],
            Subsystem::Mode2 => &[1],
            Subsystem::Modes => &[0, 1],
        };
        reduce_pure(&self.shape(), self.amplitudes(), idx)
    }
}

impl Reducible for DensityMatrix {
    /// Interprets three subsystems as (atom, mode1, mode2) and two as
    /// (mode1, mode2).
    fn reduce(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let idx: Vec<usize> = match (self.dims.len(), keep) {
            (3, Subsystem::Atom) => vec![0],
            (3, Subsystem::Mode1) => vec![1],
            (3, Subsystem::Mode2) => vec![2],
            (3, Subsystem::Modes) => vec![1, 2],
            (2, Subsystem::Mode1) => vec![0],
            (2, Subsystem::Mode2) => vec![1],
            (2, Subsystem::Modes) => vec![0, 1],
            (n, s) => {
                return Err(Error::InvalidSelector(format!(
                    "{s:?} on a density matrix with {n} subsystems"
                )))
            }
        };
        self.partial_trace(&idx)
    }
}
