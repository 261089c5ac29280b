fn main() {
    std::process::exit(realzoo_cli::main_with_args(std::env::args_os()));
}
