fn main() -> std::process::ExitCode {
    regretlab::cli::main_with(std::env::args_os())
}
