use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vnlab::experiment;

#[derive(Parser)]
#[command(name = "vnlab", version, about = "Batch experiments for bilinear control on finite von Neumann algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Output directory (overrides `output_dir` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List experiment kinds and their required fields.
    List,
}

fn main() -> ExitCode {
    env_logger::init();
    experiment::configure_threads();
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            print!("{}", experiment::list_experiments());
            ExitCode::SUCCESS
        }
        Command::Run { config, out } => match experiment::run(&config, out.as_deref()) {
            Ok(dir) => {
                println!("{}", dir.join("result.json").display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("vnlab: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
