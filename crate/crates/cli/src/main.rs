fn main() {
    std::process::exit(rbsm_cli::run(std::env::args_os()));
}
