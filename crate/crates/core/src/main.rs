fn main() {
    std::process::exit(cfchroma::cli::main_with_args(std::env::args_os()));
}
