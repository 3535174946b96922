use std::io::Write;
use std::process::ExitCode;

use coapprox::lazy::with_large_stack;

fn main() -> ExitCode {
    let args: Vec<_> = std::env::args_os().collect();
    let out = with_large_stack(move || coapprox_cli::run(args));
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
