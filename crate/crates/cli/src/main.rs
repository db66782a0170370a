use clap::Parser;

use kpchannel_cli::{run, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    if let Err(e) = run(&cfg) {
        eprintln!("kpchannel: {e}");
        std::process::exit(e.exit_code());
    }
}
