use clap::Parser;

use discrepancy::cli::{run, CliConfig};

fn main() {
    let cfg = CliConfig::parse();
    let code = run(&cfg, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
