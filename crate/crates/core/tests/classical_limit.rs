//! Strong coherent fields approach the classical two-zone fringe.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, TAU};

use ramsey_core::fock::{AtomAmplitudes, ModeState, TwoModeState};
use ramsey_core::jc::GapConfig;
use ramsey_core::ramsey::{
    classical_prob, prob_excite, run_sequence, uniform_grid, RabiMapping, SequenceConfig,
};
use ramsey_core::C64;

/// Largest |quantum - classical| over a theta scan at mean photon number `nbar`.
fn max_deviation(nbar: f64, dim: usize) -> f64 {
    let g = 1.0;
    let alpha = nbar.sqrt();
    let rabi = RabiMapping::default().rabi(g, alpha);
    // classical pulse areas rabi * tau / 2
    let (tau1, tau2) = (2.0 * FRAC_PI_4 / rabi, 2.0 * FRAC_PI_8 / rabi);
    let seq = SequenceConfig::new(g, tau1, g, tau2, 0.0, GapConfig::default());
    let (m1, leak1) = ModeState::coherent(C64::new(alpha, 0.0), dim).unwrap();
    assert!(leak1 < 1e-12);
    uniform_grid(0.0, TAU, 12)
        .into_iter()
        .map(|theta| {
            let (m2, _) = ModeState::coherent(C64::from_polar(alpha, theta), dim).unwrap();
            let field = TwoModeState::product(&m1, &m2);
            let quantum =
                prob_excite(&run_sequence(&AtomAmplitudes::ground(), &field, &seq).unwrap());
            let classical = classical_prob(rabi, tau1, tau2, theta, 0.0, 0.0).unwrap();
            (quantum - classical).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn coherent_fringe_converges_to_classical() {
    let coarse = max_deviation(25.0, 90);
    let fine = max_deviation(100.0, 215);
    eprintln!("max deviation: nbar 25 -> {coarse:.3e}, nbar 100 -> {fine:.3e}");
    assert!(fine < coarse, "deviation grew: {coarse} -> {fine}");
    assert!(coarse < 0.01, "nbar = 25 deviation {coarse}");
    assert!(fine < 0.0025, "nbar = 100 deviation {fine}");
}
