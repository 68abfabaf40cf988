fn main() {
    std::process::exit(isokappa::cli::main_with_args(std::env::args_os()));
}
