use std::path::PathBuf;

use clap::{Args, Parser, Subcommand as ClapSubcommand, ValueEnum};
use kcontact_hodge::cli_report::{self, RunConfig, StructureSpec, Subcommand, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "kcontact", version, about = "Certified basic cohomology decompositions on a K-contact torus model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Exact-arithmetic fiberwise identity suite.
    Pointwise {
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Betti numbers, Φ-subgroups and verdicts for one structure.
    Compute(Common),
    /// Refined decomposition of random self-dual forms.
    Lemma21 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Write the structure field to a binary file.
    DumpStructure {
        #[command(flatten)]
        common: Common,
        #[arg(long, short)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Flat,
    Perturbed,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "flat")]
    structure: Kind,
    #[arg(long, default_value_t = 8)]
    grid: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.3)]
    amplitude: f64,
    /// Largest Fourier mode of the perturbation.
    #[arg(long, default_value_t = 1)]
    modes: usize,
    #[arg(long, default_value_t = 1e-8)]
    tol_zero: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol_solve: f64,
    /// Also compute the bidegree subgroups.
    #[arg(long)]
    complex: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// Omit timing metadata so identical configs give identical reports.
    #[arg(long)]
    deterministic: bool,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    spectra: Option<PathBuf>,
}

impl Common {
    fn into_config(self, subcommand: Subcommand) -> RunConfig {
        let structure = match self.structure {
            Kind::Flat => StructureSpec::Flat,
            Kind::Perturbed => {
                StructureSpec::Perturbed { seed: self.seed, amplitude: self.amplitude, mode_cutoff: self.modes }
            }
        };
        RunConfig {
            subcommand,
            structure,
            grid: self.grid,
            tol_zero: self.tol_zero,
            tol_solve: self.tol_solve,
            complex: self.complex,
            threads: self.threads,
            deterministic: self.deterministic,
            json: self.json,
            spectra: self.spectra,
            ..RunConfig::default()
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let cfg = match cli.command {
        Command::Pointwise { json } => RunConfig { subcommand: Subcommand::Pointwise, json, ..RunConfig::default() },
        Command::Compute(c) => c.into_config(Subcommand::Compute),
        Command::Lemma21 { common, count } => RunConfig { count, ..common.into_config(Subcommand::Lemma21) },
        Command::DumpStructure { common, output } => {
            RunConfig { output: Some(output), ..common.into_config(Subcommand::DumpStructure) }
        }
    };
    std::process::exit(cli_report::run(&cfg));
}
