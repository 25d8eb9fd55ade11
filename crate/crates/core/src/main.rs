use std::process::ExitCode;

fn main() -> ExitCode {
    qdilemma::cli::main_with_args(std::env::args_os())
}
