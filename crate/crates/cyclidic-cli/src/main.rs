use clap::Parser;
use cyclidic_cli::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        if !matches!(e, cyclidic_cli::CliError::Validation) {
            eprintln!("error: {e}");
        }
        std::process::exit(e.exit_code());
    }
}
