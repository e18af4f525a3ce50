//! Declarative scenarios and CSV output for the ramsey-core experiments.

mod error;
mod run;
mod scenario;
mod table;

pub use error::{LabError, LabResult};
pub use run::run;
pub use scenario::{
    eval_number, parse_scenario, AtomSpec, DetectBasis, Experiment, FieldSpec, Kind, ScanSpec,
    Scenario,
};
pub use table::{emit_csv, render_csv, ResultTable};

/// Reads and validates a scenario file.
pub fn load_scenario(path: &std::path::Path) -> LabResult<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LabError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_scenario(&text)
}
