fn main() {
    std::process::exit(oasp::cli::main_with_args(std::env::args_os()));
}
