use clap::Parser;
use dualcheck_core::cli::{run, Cli};

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let out = run(&cli, argv);
    print!("{}", out.output);
    std::process::exit(out.code);
}
