use clap::Parser;
use liesym_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(&cli.command).code());
}
