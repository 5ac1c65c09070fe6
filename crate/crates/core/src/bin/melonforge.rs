use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out, err) = melonforge::cli::run_args(std::env::args_os().skip(1));
    print!("{out}");
    eprint!("{err}");
    std::io::stdout().flush().ok();
    ExitCode::from(code as u8)
}
