fn main() -> std::process::ExitCode {
    gpbound::cli::main()
}
