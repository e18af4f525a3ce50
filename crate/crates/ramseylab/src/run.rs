//! Dispatch from a validated scenario to the physics library.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use ramsey_core::decoherence::{
    analytic_decay, bell_field, lindblad_evolve, mean_photon_number, DecayConfig,
};
use ramsey_core::dispersive::{analytic_cat, cat_fidelity, prepare_cat, DispersiveConfig};
use ramsey_core::fock::{
    entropy, fidelity, partial_trace, AtomAmplitudes, DensityMatrix, Level, PureState, Subsystem,
    TwoModeState,
};
use ramsey_core::linear_optics::{bs_apply, bs_cross_correlation, BeamSplitterConfig};
use ramsey_core::multi_atom::{
    fit_cosine, joint_probability, prepare_20_02, prepare_303, transfer_entanglement, AtomRecord,
};
use ramsey_core::ramsey::{fringe_scan, visibility, FringeScenario, SequenceConfig};

use crate::error::{LabError, LabResult};
use crate::scenario::{DetectBasis, Experiment, Scenario};
use crate::table::ResultTable;

type Core<T> = ramsey_core::Result<T>;

/// Runs the scenario and returns its table, provenance included.
pub fn run(scenario: &Scenario) -> LabResult<ResultTable> {
    let context = scenario.kind.name();
    let mut table = dispatch(&scenario.experiment).map_err(|e| LabError::from_core(context, e))?;
    table
        .provenance
        .push(format!("ramseylab {}", env!("CARGO_PKG_VERSION")));
    table.provenance.extend(scenario.echo.iter().cloned());
    table.validate()?;
    Ok(table)
}

fn dispatch(exp: &Experiment) -> Core<ResultTable> {
    match exp {
        Experiment::FringeScan {
            field,
            dims,
            input,
            detect,
            seq,
            variable,
            scan,
        } => {
            let sc = FringeScenario {
                atom: AtomAmplitudes::basis(*input),
                field: field.build(*dims)?,
                seq: *seq,
                detect: *detect,
            };
            let curve = fringe_scan(&sc, *variable, &scan.grid())?;
            let mut t = ResultTable::new(&[variable.name(), "probability"]);
            for (x, p) in curve.samples.iter().zip(&curve.probabilities) {
                t.push(vec![*x, *p]);
            }
            t.note("visibility", curve.visibility());
            t.note("max", curve.max());
            t.note("min", curve.min());
            Ok(t)
        }
        Experiment::TwoAtom {
            field,
            dims,
            atoms,
            scan,
        } => {
            let field = field.build(*dims)?;
            let grid = scan.grid();
            let probs = grid
                .par_iter()
                .map(|&x| {
                    let mut second = atoms[1].seq;
                    second.gap.phi_e += x;
                    let records = [
                        AtomRecord::basis(atoms[0].input, atoms[0].seq, atoms[0].detect),
                        AtomRecord::basis(atoms[1].input, second, atoms[1].detect),
                    ];
                    joint_probability(&field, &records)
                })
                .collect::<Core<Vec<f64>>>()?;
            let mut t = ResultTable::new(&["phi", "joint_probability"]);
            for (x, p) in grid.iter().zip(&probs) {
                t.push(vec![*x, *p]);
            }
            let (a, b, s) = fit_cosine(&grid, &probs)?;
            t.note("fit_offset", a);
            t.note("fit_cos", b);
            t.note("fit_sin", s);
            t.note("visibility", visibility(&probs));
            Ok(t)
        }
        Experiment::Prepare2002 { areas, gaps } => {
            let (p, state) = prepare_20_02(areas.0, areas.1, *gaps)?;
            let mut t = amplitude_table(&state)?;
            t.note("probability", p);
            Ok(t)
        }
        Experiment::Prepare303 {
            areas,
            gaps,
            third,
            third_gap,
        } => {
            let (p2, two) = prepare_20_02(areas.0, areas.1, *gaps)?;
            let (p3, state) = prepare_303(&two, third.0, third.1, *third_gap)?;
            let mut t = amplitude_table(&state)?;
            t.note("probability_two_photon", p2);
            t.note("probability_third_atom", p3);
            t.note("probability", p2 * p3);
            Ok(t)
        }
        Experiment::Transfer {
            field,
            dims,
            first_area1,
            second,
            scan,
        } => {
            let field = field.build(*dims)?;
            let second = SequenceConfig::resonant(second.0, second.1, Default::default());
            let grid = scan.grid();
            let rows = grid
                .par_iter()
                .map(|&x| {
                    let first = SequenceConfig::resonant(*first_area1, x, Default::default());
                    let out = transfer_entanglement(&field, &first, &second)?;
                    let (g, e) = (Level::Ground, Level::Excited);
                    Ok(vec![
                        x,
                        out.probability(g, g),
                        out.probability(g, e),
                        out.probability(e, g),
                        out.probability(e, e),
                        out.atom_entropy()?,
                    ])
                })
                .collect::<Core<Vec<Vec<f64>>>>()?;
            let mut t = ResultTable::new(&["area", "p_gg", "p_ge", "p_eg", "p_ee", "atom_entropy"]);
            t.rows = rows;
            t.note(
                "field_entropy",
                entropy(&partial_trace(&field, Subsystem::Mode1)?)?,
            );
            Ok(t)
        }
        Experiment::Decay {
            kappa,
            dims,
            steps,
            scan,
        } => {
            let ideal = bell_field(*dims)?;
            let rho0 = DensityMatrix::from_state(&ideal)?;
            let grid = scan.grid();
            let rows = grid
                .par_iter()
                .map(|&time| {
                    let cfg = DecayConfig::new(kappa.0, kappa.1, time);
                    let rho =
                        lindblad_evolve(&rho0, &cfg, steps.unwrap_or_else(|| cfg.default_steps()))?;
                    let exact = analytic_decay(&cfg, *dims)?;
                    let deviation = (rho.matrix() - exact.matrix())
                        .iter()
                        .map(|z| z.norm())
                        .fold(0.0, f64::max);
                    Ok(vec![
                        time,
                        rho.trace(),
                        rho.expectation_pure(ideal.amplitudes())?.re,
                        mean_photon_number(&rho, 0)?,
                        mean_photon_number(&rho, 1)?,
                        deviation,
                    ])
                })
                .collect::<Core<Vec<Vec<f64>>>>()?;
            let mut t =
                ResultTable::new(&["t", "trace", "fidelity", "n1", "n2", "analytic_deviation"]);
            t.rows = rows;
            Ok(t)
        }
        Experiment::DispersiveCat {
            alpha,
            beta,
            g,
            detuning,
            shifts,
            input,
            basis,
            dims,
        } => {
            let cfg = DispersiveConfig::with_shifts(*g, *detuning, shifts.0, shifts.1);
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let outcomes: Vec<AtomAmplitudes> = match basis {
                DetectBasis::Energy => vec![AtomAmplitudes::ground(), AtomAmplitudes::excited()],
                DetectBasis::Symmetric => [1.0, -1.0]
                    .iter()
                    .map(|s| AtomAmplitudes {
                        ground: C64::new(h, 0.0),
                        excited: C64::new(s * h, 0.0),
                    })
                    .collect(),
            };
            let (a1, b1) = (
                *alpha * C64::from_polar(1.0, shifts.0),
                *beta * C64::from_polar(1.0, shifts.1),
            );
            let mut t = ResultTable::new(&[
                "outcome",
                "probability",
                "fidelity_analytic",
                "fidelity_even",
                "fidelity_odd",
            ]);
            let mut total = 0.0;
            for (i, det) in outcomes.iter().enumerate() {
                let r = prepare_cat(*alpha, *beta, input, det, &cfg, *dims)?;
                let target = analytic_cat(*alpha, *beta, input, det, &cfg, *dims)?;
                total += r.probability;
                t.push(vec![
                    i as f64,
                    r.probability,
                    fidelity(&r.field, &target)?,
                    cat_fidelity(&r.field, a1, b1, 1.0, 0.0)?,
                    cat_fidelity(&r.field, a1, b1, -1.0, 0.0)?,
                ]);
            }
            t.note("probability_sum", total);
            t.note("validity_ratio", cfg.validity_ratio(dims.0.max(dims.1) - 1));
            Ok(t)
        }
        Experiment::BeamSplitter {
            field,
            dims,
            reflectivity,
            phase,
        } => {
            let input = field.build(*dims)?;
            let bs = BeamSplitterConfig::new(
                C64::from_polar(reflectivity.sqrt(), *phase),
                C64::new((1.0 - reflectivity).sqrt(), 0.0),
            )?;
            let out = bs_apply(&input, &bs)?;
            let mut t = amplitude_table(&out)?;
            let cross = bs_cross_correlation(&bs, &input)?;
            t.note("cross_correlation_re", cross.re);
            t.note("cross_correlation_im", cross.im);
            Ok(t)
        }
    }
}

/// One row per basis state `|n, mu>`.
fn amplitude_table(state: &TwoModeState) -> Core<ResultTable> {
    let mut t = ResultTable::new(&["n", "mu", "re", "im", "probability"]);
    for (n, mu, a) in state.iter() {
        t.push(vec![n as f64, mu as f64, a.re, a.im, a.norm_sqr()]);
    }
    t.note("norm", state.norm_sqr());
    if state.dims().0 > 1 && state.dims().1 > 1 {
        t.note(
            "mode_entropy",
            entropy(&partial_trace(state, Subsystem::Mode1)?)?,
        );
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    fn run_text(text: &str) -> ResultTable {
        run(&parse_scenario(text).unwrap()).unwrap()
    }

    #[test]
    fn fock_scan_is_flat() {
        let t = run_text(
            "kind = fringe-scan\nfield.type = fock\nfield.n = 1\nfield.mu = 1\nscan.points = 16\n",
        );
        assert_eq!(t.rows.len(), 16);
        assert!(t.summary_value("visibility").unwrap() < 1e-10);
        let p = t.column("probability").unwrap();
        assert!(p.iter().all(|v| (v - p[0]).abs() < 1e-14));
    }

    #[test]
    fn two_atom_constants() {
        let t = run_text("kind = two-atom\nscan.points = 32\n");
        assert!((t.summary_value("fit_offset").unwrap() - 0.1118).abs() < 5e-4);
        assert!((t.summary_value("fit_cos").unwrap() - 0.1110).abs() < 5e-4);
    }

    #[test]
    fn hom_table() {
        let t = run_text("kind = beamsplitter\n");
        assert_eq!(t.columns, ["n", "mu", "re", "im", "probability"]);
        let p = t.column("probability").unwrap();
        // dims (3, 3): |1,1> sits at row 4, |2,0> at 6, |0,2> at 2
        assert!(p[4] < 1e-24);
        assert!((p[2] - 0.5).abs() < 1e-15 && (p[6] - 0.5).abs() < 1e-15);
        assert!(t.summary_value("cross_correlation_re").unwrap().abs() < 1e-15);
    }

    #[test]
    fn preparation_entropy() {
        let t = run_text("kind = prepare-20-02\n");
        assert!((t.summary_value("mode_entropy").unwrap() - std::f64::consts::LN_2).abs() < 1e-9);
        let t = run_text("kind = prepare-303\n");
        assert!((t.summary_value("mode_entropy").unwrap() - std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn decay_tracks_analytic() {
        let t = run_text("kind = decay\nscan.points = 4\n");
        assert!(t
            .column("analytic_deviation")
            .unwrap()
            .iter()
            .all(|d| *d < 1e-8));
    }

    #[test]
    fn dispersive_branches_sum_to_one() {
        let t = run_text("kind = dispersive-cat\n");
        assert!((t.summary_value("probability_sum").unwrap() - 1.0).abs() < 1e-10);
        assert!(t
            .column("fidelity_analytic")
            .unwrap()
            .iter()
            .all(|f| *f > 1.0 - 1e-9));
    }

    #[test]
    fn transfer_runs() {
        let t = run_text("kind = transfer\nscan.points = 8\n");
        assert!((t.summary_value("field_entropy").unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
        for row in &t.rows {
            let total: f64 = row[1..5].iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn truncation_overflow_is_numerical() {
        let s = parse_scenario("kind = beamsplitter\ntruncation.dim1 = 2\ntruncation.dim2 = 2\n")
            .unwrap();
        assert_eq!(run(&s).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn zero_probability_is_numerical() {
        let s =
            parse_scenario("kind = dispersive-cat\natom.input = g\natom.basis = energy\n").unwrap();
        assert_eq!(run(&s).unwrap_err().exit_code(), 3);
    }
}
