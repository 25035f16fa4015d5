fn main() {
    std::process::exit(sdual_core::cli::main_with_args(std::env::args_os()));
}
