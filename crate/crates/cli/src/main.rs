use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let inv = knormal_cli::run_args(std::env::args_os());
    print!("{}", inv.stdout);
    eprint!("{}", inv.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(inv.code.clamp(0, 255) as u8)
}
