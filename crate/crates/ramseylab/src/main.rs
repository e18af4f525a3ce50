use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ramseylab::{load_scenario, render_csv, Kind, LabError, LabResult};

#[derive(Parser)]
#[command(
    name = "ramseylab",
    version,
    about = "Ramsey interferometry with quantized cavity fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single-atom fringe scan over phi, free-flight time or field phase
    FringeScan(RunArgs),
    /// Two-atom joint detection probability versus the second atom's phase
    TwoAtom(RunArgs),
    /// Prepare (|2,0> - e^{i Theta}|0,2>)/sqrt2 with two conditioned atoms
    #[command(name = "prepare-20-02")]
    Prepare2002(RunArgs),
    /// Extend the two-photon state to three photons with a third atom
    #[command(name = "prepare-303")]
    Prepare303(RunArgs),
    /// Map field entanglement onto two atoms
    Transfer(RunArgs),
    /// Photon loss of the one-photon entangled field
    Decay(RunArgs),
    /// Entangled coherent states from one dispersive atom
    DispersiveCat(RunArgs),
    /// Two-mode Fock states through a lossless beam splitter
    Beamsplitter(RunArgs),
    /// Run any scenario, taking the experiment from its `kind` key
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file
    #[arg(long)]
    scenario: PathBuf,
    /// Output CSV; overrides `output.path`, defaults to standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for scan points; results do not depend on it
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

fn execute(expected: Option<Kind>, args: &RunArgs) -> LabResult<()> {
    if args.threads == 0 {
        return Err(LabError::Scenario("--threads must be ≥ 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| LabError::Io(format!("cannot start worker threads: {e}")))?;
    let scenario = load_scenario(&args.scenario)?;
    if let Some(k) = expected {
        if k != scenario.kind {
            return Err(LabError::Scenario(format!(
                "subcommand {} cannot run a scenario of kind {}",
                k.name(),
                scenario.kind.name()
            )));
        }
    }
    let table = pool.install(|| ramseylab::run(&scenario))?;
    match args.out.as_ref().or(scenario.output.as_ref()) {
        Some(path) => ramseylab::emit_csv(&table, path),
        None => std::io::stdout()
            .lock()
            .write_all(render_csv(&table).as_bytes())
            .map_err(|e| LabError::Io(format!("cannot write to standard output: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (kind, args) = match &cli.command {
        Command::FringeScan(a) => (Some(Kind::FringeScan), a),
        Command::TwoAtom(a) => (Some(Kind::TwoAtom), a),
        Command::Prepare2002(a) => (Some(Kind::Prepare2002), a),
        Command::Prepare303(a) => (Some(Kind::Prepare303), a),
        Command::Transfer(a) => (Some(Kind::Transfer), a),
        Command::Decay(a) => (Some(Kind::Decay), a),
        Command::DispersiveCat(a) => (Some(Kind::DispersiveCat), a),
        Command::Beamsplitter(a) => (Some(Kind::BeamSplitter), a),
        Command::Run(a) => (None, a),
    };
    match execute(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ramseylab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
