fn main() {
    std::process::exit(infodist_cli::run(std::env::args_os()));
}
