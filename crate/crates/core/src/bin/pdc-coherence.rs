fn main() -> std::process::ExitCode {
    pdc_coherence::cli::main()
}
