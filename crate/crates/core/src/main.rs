fn main() -> std::process::ExitCode {
    padfa::cli::main()
}
