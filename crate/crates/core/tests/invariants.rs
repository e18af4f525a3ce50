use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

use ramsey_core::decoherence::{lindblad_evolve, DecayConfig};
use ramsey_core::dispersive::{dispersive_propagate, DispersiveConfig};
use ramsey_core::fock::{
    entropy, partial_trace, AtomAmplitudes, DensityMatrix, JointState, Level, ModeState, PureState,
    Subsystem, TwoModeState,
};
use ramsey_core::jc::{amp_c, amp_s, zone_propagate, GapConfig, ZoneConfig};
use ramsey_core::linear_optics::{bs_apply, bs_inverse, BeamSplitterConfig};
use ramsey_core::ramsey::{
    fringe_scan, interference_functional, prob_excite_closed_form, uniform_grid, FringeScenario,
    ScanVariable, SequenceConfig,
};
use ramsey_core::C64;

const MAX_DIM: usize = 5;

fn normalize(raw: &[(f64, f64)]) -> Option<Vec<C64>> {
    let amps: Vec<C64> = raw.iter().map(|&(re, im)| C64::new(re, im)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    (norm > 0.1).then(|| amps.iter().map(|a| a / norm).collect())
}

prop_compose! {
    fn two_mode()(d1 in 1..=MAX_DIM, d2 in 1..=MAX_DIM)
        (raw in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), d1 * d2), d1 in Just(d1), d2 in Just(d2))
        -> Option<TwoModeState> {
        normalize(&raw).map(|a| TwoModeState::from_amplitudes((d1, d2), a).unwrap())
    }
}

/// Joint state whose top level of the driven mode is empty in the `|e>`
/// branch, so a zone on `mode` stays inside the truncation.
fn joint_for(mode: usize) -> impl Strategy<Value = Option<JointState>> {
    (2..=MAX_DIM, 2..=MAX_DIM).prop_flat_map(move |(d1, d2)| {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2 * d1 * d2).prop_map(move |raw| {
            let mut raw = raw;
            for n in 0..d1 {
                for mu in 0..d2 {
                    let top = if mode == 1 { n + 1 == d1 } else { mu + 1 == d2 };
                    if top {
                        raw[d1 * d2 + n * d2 + mu] = (0.0, 0.0);
                    }
                }
            }
            let amps = normalize(&raw)?;
            let (g, e) = amps.split_at(d1 * d2);
            let g = TwoModeState::from_amplitudes((d1, d2), g.to_vec()).unwrap();
            let e = TwoModeState::from_amplitudes((d1, d2), e.to_vec()).unwrap();
            Some(JointState::from_branches(&g, &e).unwrap())
        })
    })
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sector_amplitudes_are_normalized(n in -1i64..40, g in 0.0..3.0f64, d in -20.0..20.0f64, tau in 0.0..10.0f64) {
        let total = amp_c(n, g, d, tau).norm_sqr() + amp_s(n, g, d, tau).norm_sqr();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zone_is_unitary(psi in joint_for(1), g in 0.1..2.0f64, tau in 0.0..4.0f64, d in -5.0..5.0f64, start in 0.0..3.0f64) {
        let Some(psi) = psi else { return Ok(()) };
        let out = zone_propagate(&psi, &ZoneConfig::new(g, tau, d, 1).starting_at(start)).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zone_semigroup(psi in joint_for(2), g in 0.1..2.0f64, ta in 0.0..2.0f64, tb in 0.0..2.0f64, d in -5.0..5.0f64, s in 0.0..3.0f64) {
        let Some(psi) = psi else { return Ok(()) };
        let whole = zone_propagate(&psi, &ZoneConfig::new(g, ta + tb, d, 2).starting_at(s)).unwrap();
        let half = zone_propagate(&psi, &ZoneConfig::new(g, ta, d, 2).starting_at(s)).unwrap();
        let split = zone_propagate(&half, &ZoneConfig::new(g, tb, d, 2).starting_at(s + ta)).unwrap();
        prop_assert!(max_diff(whole.amplitudes(), split.amplitudes()) < 1e-12);
    }

    #[test]
    fn schmidt_spectra_agree(f in two_mode()) {
        let Some(f) = f else { return Ok(()) };
        let r1 = partial_trace(&f, Subsystem::Mode1).unwrap();
        let r2 = partial_trace(&f, Subsystem::Mode2).unwrap();
        prop_assert!((entropy(&r1).unwrap() - entropy(&r2).unwrap()).abs() < 1e-9);
        prop_assert!((r1.purity() - r2.purity()).abs() < 1e-12);
        prop_assert!(r1.purity() <= 1.0 + 1e-12);
        let full = DensityMatrix::from_state(&f).unwrap();
        prop_assert!((full.purity() - 1.0).abs() < 1e-12);
        prop_assert!(entropy(&full).unwrap().abs() < 1e-9);
    }

    #[test]
    fn tensor_of_normalized_parts_is_normalized(
        a in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..6),
        b in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..6),
        theta in 0.0..TAU,
    ) {
        let (Some(a), Some(b)) = (normalize(&a), normalize(&b)) else { return Ok(()) };
        let m1 = ModeState::from_amplitudes(a).unwrap();
        let m2 = ModeState::from_amplitudes(b).unwrap();
        let atom = AtomAmplitudes::new(C64::new(theta.cos(), 0.0), C64::from_polar(theta.sin(), 0.4)).unwrap();
        let joint = JointState::tensor(&atom, &m1, &m2);
        prop_assert!((joint.norm_sqr() - 1.0).abs() < 1e-12);
        let rho = partial_trace(&joint, Subsystem::Atom).unwrap();
        prop_assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fock_fields_never_fringe(n in 0usize..6, mu in 0usize..6, g1 in 0.1..2.0f64, g2 in 0.1..2.0f64,
                                t1 in 0.0..3.0f64, t2 in 0.0..3.0f64, d in -3.0..3.0f64, gap in 0.0..2.0f64, excited in any::<bool>()) {
        let input = if excited { Level::Excited } else { Level::Ground };
        let sc = FringeScenario {
            atom: AtomAmplitudes::basis(input),
            field: TwoModeState::fock(n, mu, (n + 2, mu + 2)).unwrap(),
            seq: SequenceConfig::new(g1, t1, g2, t2, d, GapConfig::new(gap, 0.0, 0.0)),
            detect: input.flip(),
        };
        let curve = fringe_scan(&sc, ScanVariable::Phi, &uniform_grid(0.0, TAU, 12)).unwrap();
        prop_assert!(curve.visibility() < 1e-10);
    }

    #[test]
    fn fringe_depth_is_four_times_functional(f in two_mode(), t1 in 0.1..2.0f64, t2 in 0.1..2.0f64, d in -2.0..2.0f64, gap in 0.0..1.5f64) {
        let Some(f) = f else { return Ok(()) };
        let (d1, d2) = f.dims();
        let f = f.resized((d1 + 1, d2 + 1)).unwrap();
        let base = SequenceConfig::new(1.0, t1, 0.8, t2, d, GapConfig::new(gap, 0.0, 0.0));
        let report = interference_functional(&f, &base).unwrap();
        // P(psi) = P0 + 2 Re(e^{-i psi} I) with psi = Delta T + phi peaks at psi = arg I
        let at = |psi: f64| {
            let phi = psi - d * gap;
            prob_excite_closed_form(&f, &SequenceConfig { gap: GapConfig::new(gap, phi, 0.0), ..base }).unwrap()
        };
        let arg = report.sum.arg();
        let depth = at(arg) - at(arg + PI);
        prop_assert!((depth - 4.0 * report.sum.norm()).abs() < 1e-12);
        prop_assert_eq!(report.fringes, report.sum.norm() > 1e-12);
    }

    #[test]
    fn dispersive_keeps_magnitudes(psi in joint_for(1), s1 in 0.0..3.0f64, s2 in 0.0..3.0f64) {
        let Some(psi) = psi else { return Ok(()) };
        let out = dispersive_propagate(&psi, &DispersiveConfig::with_shifts(1.0, 25.0, s1, s2)).unwrap();
        for (a, b) in psi.amplitudes().iter().zip(out.amplitudes()) {
            prop_assert!((a.norm() - b.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn beam_splitter_is_unitary(f in two_mode(), refl in 0.0..=1.0f64, phase in 0.0..TAU) {
        let Some(f) = f else { return Ok(()) };
        let (d1, d2) = f.dims();
        // every sector up to the largest total fits after mixing
        let d = d1 + d2 - 1;
        let f = f.resized((d, d)).unwrap();
        let bs = BeamSplitterConfig::new(C64::from_polar(refl.sqrt(), phase), C64::new((1.0 - refl).sqrt(), 0.0)).unwrap();
        let out = bs_apply(&f, &bs).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        let back = bs_apply(&out, &bs_inverse(&bs)).unwrap();
        prop_assert!(max_diff(back.amplitudes(), f.amplitudes()) < 1e-12);
    }

    #[test]
    fn lindblad_keeps_trace_and_hermiticity(f in two_mode(), k1 in 0.0..2.0f64, k2 in 0.0..2.0f64, t in 0.0..1.5f64) {
        let Some(f) = f else { return Ok(()) };
        let rho0 = DensityMatrix::from_state(&f).unwrap();
        let rho = lindblad_evolve(&rho0, &DecayConfig::new(k1, k2, t), 200).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-9);
        let m = rho.matrix();
        prop_assert!((m - m.adjoint()).iter().all(|z| z.norm() < 1e-12));
        prop_assert!(rho.eigenvalues().iter().all(|&l| l > -1e-9));
    }
}
