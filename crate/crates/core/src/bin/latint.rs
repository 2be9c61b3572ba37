fn main() {
    std::process::exit(latint::cli::main_with_args(std::env::args_os()));
}
