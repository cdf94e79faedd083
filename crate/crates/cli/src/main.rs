fn main() {
    std::process::exit(nbscope_cli::run_cli(std::env::args_os()));
}
