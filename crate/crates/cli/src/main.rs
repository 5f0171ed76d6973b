use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(subwin::run(std::env::args_os()))
}
