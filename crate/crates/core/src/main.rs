use clap::Parser;
use qudit_qft::cli::{execute, Cli, RunConfig};

fn main() {
    let cfg = RunConfig::from(Cli::parse());
    std::process::exit(execute(&cfg));
}
