use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use forest_atoms::cli::{self, Common, VerifyArgs, VerifySource};
use forest_atoms::io::campaign::CampaignSpec;

/// Minimal spanning forests, their atoms and the timescale hierarchy.
#[derive(Parser)]
#[command(name = "forest-atoms", version)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print only the essential line.
    #[arg(long, global = true)]
    quiet: bool,
    /// Largest vertex count accepted for exhaustive enumeration.
    #[arg(long, global = true, value_name = "N")]
    cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print phi^1..phi^N and the convexity profile.
    Phi { input: PathBuf },
    /// Print the atoms of level k with labels and rho.
    Atoms {
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Check the structural statements on a graph or a random campaign.
    Verify {
        /// Edge-list or matrix file.
        input: Option<PathBuf>,
        /// Campaign parameters, e.g. n=7,trials=500,seed=1,weights=1..5
        #[arg(long, value_name = "SPEC", conflicts_with_all = ["input", "replay", "self_test"])]
        random: Option<String>,
        /// Recompute a saved analysis document and compare.
        #[arg(long, value_name = "DOC", conflicts_with_all = ["input", "self_test"])]
        replay: Option<PathBuf>,
        /// Run against a deliberately corrupted oracle.
        #[arg(long, conflicts_with = "input")]
        self_test: bool,
        /// Highest level to check.
        #[arg(long)]
        upto: Option<usize>,
        /// Worker threads for campaigns (0 = all cores).
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Where counterexamples are written.
        #[arg(long, value_name = "PATH")]
        witness: Option<PathBuf>,
    },
    /// Print the hierarchy levels, optionally writing a DOT file.
    Hierarchy {
        input: PathBuf,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Write the full analysis document.
    Analyze {
        input: PathBuf,
        /// Include the verification report.
        #[arg(long)]
        verify: bool,
    },
}

fn run(cli: Cli, out: &mut dyn Write) -> forest_atoms::Result<u8> {
    let c = Common {
        json: cli.common.json,
        quiet: cli.common.quiet,
        cap: cli.common.cap,
    };
    let mut err = std::io::stderr();
    match cli.command {
        Command::Phi { input } => cli::cmd_phi(&cli::load(&input, &mut err, &c)?, &c, out),
        Command::Atoms { input, k } => cli::cmd_atoms(&cli::load(&input, &mut err, &c)?, k, &c, out),
        Command::Hierarchy { input, dot } => {
            cli::cmd_hierarchy(&cli::load(&input, &mut err, &c)?, dot.as_deref(), &c, out)
        }
        Command::Analyze { input, verify } => cli::cmd_analyze(&cli::load(&input, &mut err, &c)?, verify, &c, out),
        Command::Verify { input, random, replay, self_test, upto, threads, witness } => {
            let args = VerifyArgs { upto, threads, witness };
            let spec;
            let source = if let Some(text) = random {
                spec = CampaignSpec::parse(&text)?;
                VerifySource::Random(spec)
            } else if let Some(path) = replay.as_deref() {
                VerifySource::Replay(path)
            } else if self_test {
                VerifySource::SelfTest
            } else if let Some(path) = input.as_deref() {
                VerifySource::File(path)
            } else {
                return Err(forest_atoms::Error::NotApplicable(
                    "verify needs an input file, --random, --replay or --self-test".into(),
                ));
            };
            cli::cmd_verify(source, &args, &c, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { cli::EXIT_USAGE } else { cli::EXIT_OK });
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e))
        }
    }
}
