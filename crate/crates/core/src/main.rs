fn main() -> std::process::ExitCode {
    prelie_rota::cli::main_exit()
}
