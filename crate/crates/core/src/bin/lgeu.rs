fn main() {
    std::process::exit(lgeu::cli::run_cli(std::env::args_os()));
}
