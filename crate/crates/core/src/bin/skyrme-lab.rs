use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use skyrme_lab::config::{parse_config, Command};
use skyrme_lab::runner::run;
use skyrme_lab::SkyrmeError;

#[derive(Parser)]
#[command(
    name = "skyrme-lab",
    version,
    about = "Hedgehog skyrmion profiles, masses and dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a static profile equation and write the profile.
    Static(Overrides),
    /// Masses of the four B=2 configurations.
    MassTable(Overrides),
    /// Static equation evaluated on the kink profile against both source terms.
    CompareKink(Overrides),
    /// Perturb an equilibrium, evolve it and write snapshots and mode histories.
    Evolve(Overrides),
    /// Sine spectrum of a snapshot file (`--input`).
    Spectrum(Overrides),
}

/// Every flag is named after a configuration key and overrides the config file.
#[derive(Args, Debug, Default)]
struct Overrides {
    /// Configuration file with `key = value` lines.
    #[arg(long, short = 'c')]
    config: Option<PathBuf>,
    #[arg(long = "L")]
    l: Option<String>,
    #[arg(long = "N")]
    n_intervals: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long = "t_end", alias = "t-end")]
    t_end: Option<String>,
    #[arg(long)]
    j: Option<String>,
    #[arg(long = "A")]
    a: Option<String>,
    /// quartic or sixth.
    #[arg(long)]
    model: Option<String>,
    /// none, pion-mass or modified.
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    #[arg(long = "m_pi", alias = "m-pi")]
    m_pi: Option<String>,
    #[arg(long)]
    e: Option<String>,
    #[arg(long = "F_pi")]
    f_pi: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long = "eps6_sq", alias = "eps6-sq")]
    eps6_sq: Option<String>,
    /// Comma-separated snapshot times.
    #[arg(long)]
    snapshots: Option<String>,
    /// Comma-separated mode indices for histories.
    #[arg(long)]
    modes: Option<String>,
    #[arg(long = "sample_interval", alias = "sample-interval")]
    sample_interval: Option<String>,
    /// unit or sin-squared.
    #[arg(long = "m4_reading", alias = "m4-reading")]
    m4_reading: Option<String>,
    #[arg(long)]
    input: Option<String>,
}

impl Overrides {
    fn flags(&self) -> Vec<(String, String)> {
        let pairs = [
            ("L", &self.l),
            ("N", &self.n_intervals),
            ("dt", &self.dt),
            ("t_end", &self.t_end),
            ("j", &self.j),
            ("A", &self.a),
            ("model", &self.model),
            ("variant", &self.variant),
            ("k", &self.k),
            ("n", &self.n),
            ("out", &self.out),
            ("m_pi", &self.m_pi),
            ("e", &self.e),
            ("F_pi", &self.f_pi),
            ("epsilon", &self.epsilon),
            ("eps6_sq", &self.eps6_sq),
            ("snapshots", &self.snapshots),
            ("modes", &self.modes),
            ("sample_interval", &self.sample_interval),
            ("m4_reading", &self.m4_reading),
            ("input", &self.input),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

fn execute(command: Command, overrides: &Overrides) -> Result<(), SkyrmeError> {
    let text = match &overrides.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| SkyrmeError::from(e).annotate(format!("reading {}", path.display())))?,
        None => String::new(),
    };
    let config = parse_config(command, &text, &overrides.flags())?;
    let report = run(&config)?;
    for line in &report.summary {
        println!("{line}");
    }
    for file in &report.files {
        println!("wrote {}", file.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, overrides) = match &cli.command {
        Cmd::Static(o) => (Command::Static, o),
        Cmd::MassTable(o) => (Command::MassTable, o),
        Cmd::CompareKink(o) => (Command::CompareKink, o),
        Cmd::Evolve(o) => (Command::Evolve, o),
        Cmd::Spectrum(o) => (Command::Spectrum, o),
    };
    match execute(command, overrides) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error[{}]: {err}", err.category());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
