fn main() {
    std::process::exit(detrace::cli::main_with_args(std::env::args_os()));
}
