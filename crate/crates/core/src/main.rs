fn main() {
    std::process::exit(tricorr::cli::run(std::env::args_os()));
}
