fn main() -> std::process::ExitCode {
    qrlift::cli::main()
}
