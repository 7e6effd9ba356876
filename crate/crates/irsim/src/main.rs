use std::process::ExitCode;

fn main() -> ExitCode {
    irsim::cli::main()
}
