fn main() {
    std::process::exit(qnls_cli::cli::main_with_args(std::env::args_os()));
}
