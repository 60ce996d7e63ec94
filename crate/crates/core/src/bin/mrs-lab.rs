fn main() -> std::process::ExitCode {
    mrs_lab::cli::run(std::env::args_os())
}
