fn main() {
    std::process::exit(khinlit_cli::cli::run());
}
