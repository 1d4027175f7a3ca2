use std::process::ExitCode;

fn main() -> ExitCode {
    match online_rlbwt::cli::main_with_args(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rlbwt: {e}");
            ExitCode::FAILURE
        }
    }
}
