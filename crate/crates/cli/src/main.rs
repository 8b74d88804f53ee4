// Copyright 2026 The coherent-qubits Authors
// SPDX-License-Identifier: Apache-2.0

//! `cqubits`: regenerates the sweep data as CSV and runs the validation
//! report. Exit codes: 0 success, 1 validation failure, 2 bad config.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coherent_qubits::experiments::{run, Experiment, RunConfig};

#[derive(Parser)]
#[command(
    name = "cqubits",
    version,
    about = "Exact simulator for coherent-state qubits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Teleportation success probability against α.
    TeleportSweep(Common),
    /// Hadamard gate fidelity and post-selected success against α.
    HadamardSweep(Common),
    /// Restoration success after fiber loss against λL.
    LossSweep(Common),
    /// Phase-flip code: closed form against Monte Carlo.
    Ecc(Common),
    /// Oracle and invariant checks.
    Validate(Common),
}

#[derive(Args, Default)]
struct Common {
    /// `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    /// start:stop:step or a single value.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// re,im
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// re,im
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    /// pm or zeroalpha.
    #[arg(long)]
    encoding: Option<String>,
    /// Fiber loss per km.
    #[arg(long)]
    lambda: Option<String>,
    /// Fiber length grid in km.
    #[arg(long, conflicts_with = "eta")]
    length: Option<String>,
    /// Transmissivity grid.
    #[arg(long)]
    eta: Option<String>,
    /// Phase-flip probability grid.
    #[arg(long)]
    pe: Option<String>,
    /// Code parameter; blocks hold 2n+1 modes.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    fidelity_target: Option<String>,
    /// off, after or before.
    #[arg(long)]
    restoration: Option<String>,
    /// ideal or physical.
    #[arg(long)]
    hadamard: Option<String>,
}

impl Common {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        [
            ("seed", &self.seed),
            ("trials", &self.trials),
            ("alpha", &self.alpha),
            ("mu", &self.mu),
            ("nu", &self.nu),
            ("encoding", &self.encoding),
            ("lambda", &self.lambda),
            ("length", &self.length),
            ("eta", &self.eta),
            ("pe", &self.pe),
            ("n", &self.n),
            ("fidelity_target", &self.fidelity_target),
            ("restoration", &self.restoration),
            ("hadamard", &self.hadamard),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
        .collect()
    }

    fn config(&self, experiment: Experiment) -> Result<RunConfig, String> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                RunConfig::parse(experiment, &text)
                    .map_err(|e| format!("{}: {e}", path.display()))?
            }
            None => RunConfig::new(experiment),
        };
        for (key, value) in self.overrides() {
            cfg.set(key, value)
                .map_err(|e| format!("--{}: {e}", key.replace('_', "-")))?;
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.display().to_string());
        }
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, common) = match &cli.command {
        Command::TeleportSweep(c) => (Experiment::TeleportSweep, c),
        Command::HadamardSweep(c) => (Experiment::HadamardSweep, c),
        Command::LossSweep(c) => (Experiment::LossSweep, c),
        Command::Ecc(c) => (Experiment::Ecc, c),
        Command::Validate(c) => (Experiment::Validate, c),
    };
    let cfg = match common.config(experiment) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("cqubits: {e}");
            return ExitCode::from(2);
        }
    };
    let output = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("cqubits: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &output.text).map_err(|e| format!("{path}: {e}")),
        None => {
            print!("{}", output.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("cqubits: {e}");
        return ExitCode::from(2);
    }
    if output.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
