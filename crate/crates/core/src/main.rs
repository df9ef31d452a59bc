fn main() {
    std::process::exit(disorth::cli::main_with_args(std::env::args_os()));
}
