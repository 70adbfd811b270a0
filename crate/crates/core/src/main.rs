fn main() {
    std::process::exit(treenorm::cli::main_with_args(std::env::args_os()));
}
