//! Truncated Fock-space states and the diagnostics used across the crate.
//!
//! Single modes are [`ModeState`], field pairs are [`TwoModeState`] and the
//! atom-plus-fields system is [`JointState`], stored `(atom, n, mu)`
//! row-major with `|g> = 0`, `|e> = 1`. All values are immutable; the free
//! functions below are thin entry points over the type methods.

mod density;
mod state;

pub use density::{DensityMatrix, Reducible, Subsystem, EIGEN_FLOOR};
pub use state::{AtomAmplitudes, JointState, Level, ModeState, PureState, TwoModeState, NORM_TOL};

use crate::{Error, Result, C64};

pub fn make_fock(n: usize, dim: usize) -> Result<ModeState> {
    ModeState::fock(n, dim)
}

/// Truncated coherent state plus the probability weight lost to truncation.
pub fn make_coherent(alpha: C64, dim: usize) -> Result<(ModeState, f64)> {
    ModeState::coherent(alpha, dim)
}

pub fn make_zero_one(alpha: C64) -> ModeState {
    ModeState::zero_one(alpha, 2).expect("two levels always fit")
}

pub fn tensor(atom: &AtomAmplitudes, m1: &ModeState, m2: &ModeState) -> JointState {
    JointState::tensor(atom, m1, m2)
}

pub fn partial_trace<S: Reducible>(state: &S, keep: Subsystem) -> Result<DensityMatrix> {
    state.reduce(keep)
}

pub fn entropy(rho: &DensityMatrix) -> Result<f64> {
    rho.entropy()
}

/// `|<a|b>|^2 / (|a|^2 |b|^2)`.
pub fn fidelity<S: PureState>(a: &S, b: &S) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let na = a.norm_sqr();
    let nb = b.norm_sqr();
    if na < 1e-300 || nb < 1e-300 {
        return Err(Error::ZeroProbability {
            probability: na.min(nb),
        });
    }
    Ok(a.inner(b).norm_sqr() / (na * nb))
}

/// `<a1^dag a2>` of a pure two-mode field.
pub fn cross_expectation(state: &TwoModeState) -> C64 {
    state.cross_expectation()
}

/// `Tr(rho a1^dag a2)` for a density matrix over two modes.
pub fn cross_expectation_mixed(rho: &DensityMatrix) -> Result<C64> {
    let [n1, n2] = rho.dims() else {
        return Err(Error::InvalidSelector(format!(
            "cross expectation needs two modes, got dims {:?}",
            rho.dims()
        )));
    };
    let (n1, n2) = (*n1, *n2);
    // Tr(rho a1^dag a2) = sum <n,mu| a1^dag a2 |n',mu'> rho[(n',mu'),(n,mu)]
    let mut sum = C64::new(0.0, 0.0);
    for n in 0..n1.saturating_sub(1) {
        for mu in 1..n2 {
            let w = ((n + 1) as f64 * mu as f64).sqrt();
            let from = n * n2 + mu;
            let to = (n + 1) * n2 + (mu - 1);
            sum += rho.get(from, to) * w;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fidelity_examples() {
        let (a, _) = make_coherent(C64::new(1.0, 0.0), 30).unwrap();
        let (b, _) = make_coherent(C64::new(-1.0, 0.0), 30).unwrap();
        assert_relative_eq!(fidelity(&a, &a).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(fidelity(&a, &b).unwrap(), (-4f64).exp(), epsilon = 1e-14);
        let f0 = make_fock(0, 3).unwrap();
        let f1 = make_fock(1, 3).unwrap();
        assert_eq!(fidelity(&f0, &f1).unwrap(), 0.0);
        let z = ModeState::from_amplitudes(vec![C64::new(0.0, 0.0); 3]).unwrap();
        assert!(fidelity(&f0, &z).is_err());
        assert!(fidelity(&f0, &make_fock(0, 4).unwrap()).is_err());
    }

    #[test]
    fn coherent_pair_cross_expectation() {
        let alpha = C64::new(0.6, 0.0);
        let theta = 0.9;
        let (m1, l1) = make_coherent(alpha, 24).unwrap();
        let (m2, l2) = make_coherent(alpha * C64::from_polar(1.0, theta), 24).unwrap();
        let c = cross_expectation(&TwoModeState::product(&m1, &m2));
        let expected = C64::from_polar(alpha.norm_sqr(), theta);
        assert!((c - expected).norm() < 1e-12 + l1 + l2);
    }

    #[test]
    fn mixed_cross_expectation_matches_pure() {
        let f = TwoModeState::from_components(
            (3, 3),
            &[
                (1, 0, C64::new(0.3, 0.1)),
                (0, 1, C64::new(-0.5, 0.7)),
                (2, 1, C64::new(0.2, 0.0)),
                (1, 2, C64::new(0.0, 0.4)),
            ],
        )
        .unwrap();
        let rho = DensityMatrix::from_state(&f).unwrap();
        let a = cross_expectation_mixed(&rho).unwrap();
        let b = cross_expectation(&f);
        assert!((a - b).norm() < 1e-14);
    }
}
