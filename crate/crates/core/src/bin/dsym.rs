fn main() {
    std::process::exit(dsym::cli::main_with_args(std::env::args_os()));
}
