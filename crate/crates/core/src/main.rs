fn main() -> std::process::ExitCode {
    hypershare::cli::run()
}
