use clap::Parser;
use mgr_cli::args::Cli;
use std::io::Write;

fn main() {
    let cli = Cli::parse();
    let code = match mgr_cli::run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.body.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                std::process::exit(mgr_cli::EXIT_USAGE);
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
