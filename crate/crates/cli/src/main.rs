fn main() {
    std::process::exit(hexwave_cli::run(std::env::args_os()));
}
