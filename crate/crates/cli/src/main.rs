fn main() {
    std::process::exit(fastkde_cli::main_with_args(std::env::args_os()));
}
