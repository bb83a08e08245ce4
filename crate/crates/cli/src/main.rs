use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use opkit::commands::{cmd_dual, cmd_koszul, cmd_pd_build, cmd_pd_verify, parse_mutation, Source};
use opkit::operad::presets::Preset;
use opkit::report::Report;

#[derive(Parser)]
#[command(name = "opkit", version, about = "Exact checks for cyclic quadratic operads and homotopy inner products")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Assoc,
    Comm,
    Lie,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Preset {
        match p {
            PresetArg::Assoc => Preset::Assoc,
            PresetArg::Comm => Preset::Comm,
            PresetArg::Lie => Preset::Lie,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Cobar homology of the quadratic dual, compared with the operad.
    Koszul {
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        preset: Option<PresetArg>,
        /// Presentation JSON file.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        /// Use the colored hat operads.
        #[arg(long)]
        hat: bool,
    },
    /// Writes the quadratic dual of a presentation.
    Dual {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Homotopy inner products on a triangulated space.
    Pd {
        #[command(subcommand)]
        command: PdCommand,
    },
}

#[derive(Subcommand)]
enum PdCommand {
    /// Builds `d`, `g` and `f` through the given order and verifies them.
    Build {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long)]
        out: PathBuf,
        /// Plants a defect: sign, skip or perturb.
        #[arg(long)]
        mutate: Option<String>,
    },
    /// Re-derives every identity from a structure file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn run(cli: &Cli, argv: Vec<String>) -> opkit::Result<Report> {
    match &cli.command {
        Command::Koszul { preset, input, max_arity, hat } => {
            let src = match (preset, input) {
                (Some(p), _) => Source::Preset((*p).into()),
                (None, Some(f)) => Source::File(f),
                (None, None) => unreachable!("clap requires one of them"),
            };
            cmd_koszul(argv, &src, *max_arity, *hat)
        }
        Command::Dual { input, out } => cmd_dual(argv, input, out),
        Command::Pd { command: PdCommand::Build { complex, order, out, mutate } } => {
            let m = mutate.as_deref().map(parse_mutation).transpose()?;
            cmd_pd_build(argv, complex, *order, out, m)
        }
        Command::Pd { command: PdCommand::Verify { input } } => cmd_pd_verify(argv, input),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(&cli, argv) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
