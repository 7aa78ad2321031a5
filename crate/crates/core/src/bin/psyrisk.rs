use clap::Parser;

use psyrisk::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("psyrisk: {err}");
        std::process::exit(err.exit_code());
    }
}
