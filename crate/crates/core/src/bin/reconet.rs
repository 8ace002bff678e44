fn main() {
    std::process::exit(reconet::cli::run(std::env::args_os()));
}
