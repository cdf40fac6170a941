fn main() {
    std::process::exit(orbitport::cli::run(std::env::args_os()));
}
