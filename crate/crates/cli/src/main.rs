use clap::Parser;

use eitsim::{run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprintln!("ERROR: {e}");
                std::process::exit(1);
            }
            // --help / --version
            print!("{e}");
            std::process::exit(0);
        }
    };
    match run(cli) {
        Ok(report) => print!("{report}"),
        Err(e) => {
            eprintln!("ERROR: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
