use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = msa::interface::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code as u8)
}
