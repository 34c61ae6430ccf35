use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsteer::config::{load_noise, parse_couplings, parse_stop, Channel, Format, Method, RunConfig};
use qsteer::{run_command, CliError, CliResult, Command};
use qsteer_core::protocol::{InitialState, RunMode, StopRule};
use qsteer_core::readout::ConfusionMatrix;

/// Measurement-induced steering simulator.
#[derive(Parser)]
#[command(name = "qsteer", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Blind or non-blind steering runs.
    Steer(Flags),
    /// Blind fidelity grid over targets × J.
    Sweep(Flags),
    /// KAK decomposition and Weyl-chamber coordinates.
    Kak(Flags),
    /// Steering-circuit synthesis and verification.
    Circuit(Flags),
    /// State tomography along a blind run.
    Tomo(Flags),
    /// Process tomography of a channel.
    Qpt(Flags),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Blind,
    Nonblind,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitialArg {
    Ground,
    Mixed,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    Identity,
    Depolarizing,
    Steering,
    Cycle,
}

#[derive(Clone)]
struct Couplings(Vec<f64>);

#[derive(Args)]
struct Flags {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Catalog label (0, 1, +, -, i, -i, qutrit-equal) or angle tuple; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    target: Vec<String>,
    /// Coupling(s): `a,b,c`, `start:stop:count`, `pi/k`.
    #[arg(long = "J", allow_hyphen_values = true, value_parser = |s: &str| parse_couplings(s).map(Couplings))]
    coupling: Option<Couplings>,
    /// Number of cycles.
    #[arg(long = "N")]
    n_steps: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    trajectories: Option<usize>,
    /// Shots per measurement setting (exact expectations when absent).
    #[arg(long)]
    shots: Option<usize>,
    /// Noise block as a JSON file.
    #[arg(long)]
    noise: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Initial states per blind run or sweep cell.
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long, value_enum)]
    initial: Option<InitialArg>,
    /// Non-blind stop rule: `first-one`, `never`, `fidelity:F`.
    #[arg(long, value_parser = parse_stop)]
    stop: Option<StopRule>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Trotter slices for Pauli-string synthesis.
    #[arg(long)]
    steps: Option<usize>,
    /// Named two-qubit gate for `kak` (cnot, cz, swap, identity).
    #[arg(long)]
    gate: Option<String>,
    /// Circuit text file for `kak`.
    #[arg(long)]
    circuit: Option<PathBuf>,
    #[arg(long, value_enum)]
    channel: Option<ChannelArg>,
    /// Depolarizing strength for `--channel depolarizing`.
    #[arg(long)]
    p: Option<f64>,
    /// Wires for `--channel identity`.
    #[arg(long)]
    wires: Option<usize>,
    /// Readout confusion for tomography, as a JSON file.
    #[arg(long)]
    confusion: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Kak,
    Pauli,
    Qutrit,
}

impl Flags {
    fn merge(self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if !self.target.is_empty() {
            cfg.target = self.target;
        }
        if let Some(Couplings(j)) = self.coupling {
            cfg.coupling = j;
        }
        if self.n_steps.is_some() {
            cfg.n_steps = self.n_steps;
        }
        if let Some(m) = self.mode {
            cfg.mode = match m {
                ModeArg::Blind => RunMode::Blind,
                ModeArg::Nonblind => RunMode::NonBlind,
            };
        }
        if let Some(t) = self.trajectories {
            cfg.trajectories = t;
        }
        if self.shots.is_some() {
            cfg.shots = self.shots;
        }
        if let Some(path) = &self.noise {
            cfg.noise = load_noise(path)?;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        if let Some(f) = self.format {
            cfg.format = match f {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            };
        }
        if let Some(r) = self.repeats {
            cfg.repeats = r;
        }
        if let Some(i) = self.initial {
            cfg.initial = match i {
                InitialArg::Ground => InitialState::Ground,
                InitialArg::Mixed => InitialState::MaximallyMixed,
                InitialArg::Random => InitialState::Random,
            };
        }
        if let Some(s) = self.stop {
            cfg.stop = s;
        }
        if let Some(m) = self.method {
            cfg.method = match m {
                MethodArg::Auto => Method::Auto,
                MethodArg::Kak => Method::Kak,
                MethodArg::Pauli => Method::Pauli,
                MethodArg::Qutrit => Method::Qutrit,
            };
        }
        if self.steps.is_some() {
            cfg.trotter_steps = self.steps;
        }
        if self.gate.is_some() {
            cfg.gate = self.gate;
        }
        if self.circuit.is_some() {
            cfg.circuit = self.circuit;
        }
        match (self.channel, self.p) {
            (Some(ChannelArg::Depolarizing), Some(p)) => cfg.channel = Some(Channel::Depolarizing { p }),
            (Some(ChannelArg::Depolarizing), None) => return Err(CliError::config("--channel depolarizing needs --p")),
            (Some(ChannelArg::Identity), _) => cfg.channel = Some(Channel::Identity { wires: self.wires.unwrap_or(1) }),
            (Some(ChannelArg::Steering), _) => cfg.channel = Some(Channel::Steering),
            (Some(ChannelArg::Cycle), _) => cfg.channel = Some(Channel::Cycle),
            (None, _) => {}
        }
        if let Some(path) = &self.confusion {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let cm: ConfusionMatrix =
                serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
            cfg.tomography_confusion = Some(cm);
        }
        Ok(cfg)
    }
}

fn run(command: Command, flags: Flags) -> CliResult<()> {
    let start = Instant::now();
    let cfg = flags.merge()?;
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let summary = run_command(command, &cfg, &out)?;
    let line = serde_json::json!({
        "summary": summary,
        "elapsed_seconds": start.elapsed().as_secs_f64(),
    });
    println!("{line}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::config(e.render().to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    let (command, flags) = match cli.command {
        Cmd::Steer(f) => (Command::Steer, f),
        Cmd::Sweep(f) => (Command::Sweep, f),
        Cmd::Kak(f) => (Command::Kak, f),
        Cmd::Circuit(f) => (Command::Circuit, f),
        Cmd::Tomo(f) => (Command::Tomo, f),
        Cmd::Qpt(f) => (Command::Qpt, f),
    };
    match run(command, flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
