use std::io;
use std::process::ExitCode;

use clap::Parser;
use scell::args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { scell::EXIT_USAGE } else { scell::EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = match scell::run(cli, &mut io::stdout().lock()) {
        Ok(c) => c,
        Err(e) => scell::report_error(&e),
    };
    ExitCode::from(code as u8)
}
