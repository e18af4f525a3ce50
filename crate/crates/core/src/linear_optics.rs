//! Lossless beam splitter acting on two-mode Fock states.
//!
//! Creation operators map as `a1^dag -> t a1^dag + i r a2^dag` and
//! `a2^dag -> i r* a1^dag + t* a2^dag`. Photon number is conserved, so each
//! total-number sector transforms on its own.

use crate::fock::TwoModeState;
use crate::jc::TRUNCATION_TOL;
use crate::{Error, Result, C64};

/// Reflection and transmission amplitudes with `|r|^2 + |t|^2 = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamSplitterConfig {
    r: C64,
    t: C64,
}

impl BeamSplitterConfig {
    pub fn new(r: C64, t: C64) -> Result<Self> {
        let norm = r.norm_sqr() + t.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "|r|^2 + |t|^2 = {norm}, expected 1"
            )));
        }
        Ok(Self { r, t })
    }

    /// Real amplitudes with reflectivity `|r|^2 = reflectivity`.
    pub fn from_reflectivity(reflectivity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&reflectivity) {
            return Err(Error::InvalidParameter(format!(
                "reflectivity {reflectivity} outside [0, 1]"
            )));
        }
        Self::new(
            C64::new(reflectivity.sqrt(), 0.0),
            C64::new((1.0 - reflectivity).sqrt(), 0.0),
        )
    }

    pub fn r(&self) -> C64 {
        self.r
    }

    pub fn t(&self) -> C64 {
        self.t
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k))
        .exp()
        .round()
}

/// Transforms a two-mode state through the splitter.
pub fn bs_apply(state: &TwoModeState, bs: &BeamSplitterConfig) -> Result<TwoModeState> {
    let (d1, d2) = state.dims();
    let (t, r) = (bs.t, bs.r);
    let ir = C64::new(0.0, 1.0) * r;
    let irc = C64::new(0.0, 1.0) * r.conj();
    let mut out = vec![C64::new(0.0, 0.0); d1 * d2];
    for (n, mu, amp) in state.iter() {
        if amp == C64::new(0.0, 0.0) {
            continue;
        }
        let norm_in = 0.5 * (ln_factorial(n) + ln_factorial(mu));
        for j in 0..=n {
            // (t a1^dag)^j (i r a2^dag)^{n-j}
            let left = binomial(n, j) * t.powu(j as u32) * ir.powu((n - j) as u32);
            for k in 0..=mu {
                // (i r* a1^dag)^k (t* a2^dag)^{mu-k}
                let right = binomial(mu, k) * irc.powu(k as u32) * t.conj().powu((mu - k) as u32);
                let p = j + k;
                let q = n + mu - p;
                let scale = (0.5 * (ln_factorial(p) + ln_factorial(q)) - norm_in).exp();
                let v = amp * left * right * scale;
                if p >= d1 || q >= d2 {
                    if v.norm_sqr() > TRUNCATION_TOL {
                        let (mode, lvl, dim) = if p >= d1 { (1, p, d1) } else { (2, q, d2) };
                        return Err(Error::TruncationOverflow { mode, n: lvl, dim });
                    }
                    continue;
                }
                out[p * d2 + q] += v;
            }
        }
    }
    Ok(TwoModeState::from_raw((d1, d2), out))
}

/// The splitter that undoes `bs`: `r -> -r`, `t -> t*`.
pub fn bs_inverse(bs: &BeamSplitterConfig) -> BeamSplitterConfig {
    BeamSplitterConfig {
        r: -bs.r,
        t: bs.t.conj(),
    }
}

/// `<a1^dag a2>` of the splitter output for the given input.
///
/// For a `|1,1>` input this vanishes for every lossless splitter: the two
/// contributions `2i(|t|^2-|r|^2) r t*` from the `|0,2>` and `|2,0>`
/// components enter with opposite signs.
pub fn bs_cross_correlation(bs: &BeamSplitterConfig, input: &TwoModeState) -> Result<C64> {
    Ok(bs_apply(input, bs)?.cross_expectation())
}

/// The one-term expression `-2i(|t|^2 - |r|^2)|r||t|` quoted for a `|1,1>`
/// input. It keeps one of the two contributions that cancel in
/// [`bs_cross_correlation`], so it is not the output correlation.
pub fn bs_cross_correlation_quoted(bs: &BeamSplitterConfig) -> C64 {
    let (r, t) = (bs.r.norm(), bs.t.norm());
    C64::new(0.0, -2.0 * (t * t - r * r) * r * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::PureState;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn config_validation() {
        assert!(BeamSplitterConfig::new(c(0.5, 0.0), c(0.5, 0.0)).is_err());
        assert!(BeamSplitterConfig::from_reflectivity(1.2).is_err());
        let bs = BeamSplitterConfig::from_reflectivity(0.2).unwrap();
        assert_relative_eq!(bs.r().norm_sqr() + bs.t().norm_sqr(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn transparent_splitter_is_identity() {
        let bs = BeamSplitterConfig::from_reflectivity(0.0).unwrap();
        let s = TwoModeState::from_components((4, 4), &[(1, 2, c(0.6, 0.0)), (2, 0, c(0.0, 0.8))])
            .unwrap();
        let out = bs_apply(&s, &bs).unwrap();
        for ((_, _, a), (_, _, b)) in s.iter().zip(out.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn single_photon_split() {
        let bs = BeamSplitterConfig::new(c(0.3, 0.4), c(0.0, (1.0f64 - 0.25).sqrt())).unwrap();
        let out = bs_apply(&TwoModeState::fock(1, 0, (2, 2)).unwrap(), &bs).unwrap();
        assert!((out.amp(1, 0) - bs.t()).norm() < 1e-15);
        assert!((out.amp(0, 1) - c(0.0, 1.0) * bs.r()).norm() < 1e-15);
        assert_relative_eq!(out.norm_sqr(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn hong_ou_mandel() {
        let bs = BeamSplitterConfig::from_reflectivity(0.5).unwrap();
        let out = bs_apply(&TwoModeState::fock(1, 1, (3, 3)).unwrap(), &bs).unwrap();
        assert!(out.amp(1, 1).norm() < 1e-15);
        assert!((out.amp(2, 0) - c(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((out.amp(0, 2) - c(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn general_pair_output() {
        for refl in [0.1, 0.3, 0.8] {
            let bs = BeamSplitterConfig::from_reflectivity(refl).unwrap();
            let out = bs_apply(&TwoModeState::fock(1, 1, (3, 3)).unwrap(), &bs).unwrap();
            let (r, t) = (refl.sqrt(), (1.0 - refl).sqrt());
            assert_relative_eq!(out.amp(1, 1).re, t * t - r * r, epsilon = 1e-15);
            let side = c(0.0, 2f64.sqrt() * r * t);
            assert!((out.amp(2, 0) - side).norm() < 1e-15);
            assert!((out.amp(0, 2) - side).norm() < 1e-15);
        }
    }

    #[test]
    fn unitary_and_invertible() {
        let bs =
            BeamSplitterConfig::new(c(0.2, -0.5), c(0.6, (1.0f64 - 0.29 - 0.36).sqrt())).unwrap();
        let s = TwoModeState::from_components(
            (6, 6),
            &[
                (0, 0, c(0.2, 0.1)),
                (1, 2, c(0.3, -0.4)),
                (2, 1, c(0.0, 0.5)),
                (1, 1, c(-0.3, 0.0)),
                (0, 3, c(0.2, 0.2)),
            ],
        )
        .unwrap();
        let out = bs_apply(&s, &bs).unwrap();
        assert_relative_eq!(out.norm_sqr(), s.norm_sqr(), epsilon = 1e-12);
        let back = bs_apply(&out, &bs_inverse(&bs)).unwrap();
        for ((_, _, a), (_, _, b)) in s.iter().zip(back.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
        // total photon number conserved sector by sector
        for total in 0..6 {
            let w_in: f64 = s
                .iter()
                .filter(|(n, m, _)| n + m == total)
                .map(|(_, _, a)| a.norm_sqr())
                .sum();
            let w_out: f64 = out
                .iter()
                .filter(|(n, m, _)| n + m == total)
                .map(|(_, _, a)| a.norm_sqr())
                .sum();
            assert_relative_eq!(w_in, w_out, epsilon = 1e-12);
        }
    }

    #[test]
    fn overflow_detected() {
        let bs = BeamSplitterConfig::from_reflectivity(0.5).unwrap();
        assert!(matches!(
            bs_apply(&TwoModeState::fock(1, 1, (2, 2)).unwrap(), &bs),
            Err(Error::TruncationOverflow { .. })
        ));
    }

    #[test]
    fn pair_correlation_vanishes() {
        let input = TwoModeState::fock(1, 1, (3, 3)).unwrap();
        for k in 0..=10 {
            let bs = BeamSplitterConfig::from_reflectivity(k as f64 / 10.0).unwrap();
            assert!(bs_cross_correlation(&bs, &input).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn unequal_numbers_correlate() {
        // (n - m) V*_11 V_21 with V the mode matrix
        let bs = BeamSplitterConfig::from_reflectivity(0.2).unwrap();
        let input = TwoModeState::fock(2, 0, (3, 3)).unwrap();
        let got = bs_cross_correlation(&bs, &input).unwrap();
        let expected = 2.0 * bs.t().conj() * c(0.0, 1.0) * bs.r();
        assert!((got - expected).norm() < 1e-14);
    }

    #[test]
    fn quoted_expression_values() {
        let bs = BeamSplitterConfig::from_reflectivity(0.2).unwrap();
        assert!((bs_cross_correlation_quoted(&bs) - c(0.0, -0.48)).norm() < 1e-15);
        let bs = BeamSplitterConfig::from_reflectivity(0.5).unwrap();
        assert!(bs_cross_correlation_quoted(&bs).norm() < 1e-15);
    }
}
