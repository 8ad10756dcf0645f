use std::process::ExitCode;

fn main() -> ExitCode {
    fca_core::cli::main()
}
