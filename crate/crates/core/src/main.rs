use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use melodic_core::report::{run_pipeline, with_out_dir, Command, PipelineConfig, PipelineError, RunOptions};

#[derive(Parser)]
#[command(name = "melodic", version, about = "Melodic originality and popularity analysis for MIDI corpora")]
struct Cli {
    /// Flat key = value config file.
    #[arg(long, global = true, default_value = "melodic.conf")]
    config: PathBuf,
    /// Treat unreadable, too-short or unmatched pieces as fatal.
    #[arg(long, global = true)]
    strict: bool,
    /// Output directory, overriding `out_dir` from the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Check the datasheet against the corpus and read every MIDI file.
    Scan,
    /// Corpus transition counts and probabilities.
    Matrix,
    /// Per-piece originality scores and the ranked table.
    Score,
    /// Popularity lookup for every title.
    Popularity,
    /// Regression, OLS, quadratic fit and pairwise t-tests.
    Stats,
    /// Tables and figures (runs every stage).
    Report,
    /// Full pipeline.
    Run,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Scan => Command::Scan,
            Cmd::Matrix => Command::Matrix,
            Cmd::Score => Command::Score,
            Cmd::Popularity => Command::Popularity,
            Cmd::Stats => Command::Stats,
            Cmd::Report => Command::Report,
            Cmd::Run => Command::Run,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = PipelineConfig::load(&cli.config)
        .map_err(PipelineError::from)
        .map(|c| with_out_dir(c, cli.out.as_deref()))
        .and_then(|c| run_pipeline(&c, cli.command.into(), &RunOptions { strict: cli.strict }));
    match result {
        Ok(summary) => {
            for line in &summary.lines {
                println!("{line}");
            }
            if !summary.issues.is_empty() {
                println!("{} issue(s):", summary.issues.len());
                for issue in &summary.issues {
                    println!("  {issue}");
                }
            }
            println!("{} file(s) written", summary.artifacts.len());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            for issue in e.issues() {
                eprintln!("  {issue}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
