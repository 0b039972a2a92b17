use clap::Parser;

use crits::cli::{run, Cli};

fn main() {
    // clap exits 2 on usage errors and 0 for --help/--version.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => err.exit(),
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
