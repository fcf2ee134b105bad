fn main() {
    std::process::exit(periodic_susy::cli::run(std::env::args_os()));
}
