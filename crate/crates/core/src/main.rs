fn main() {
    std::process::exit(qmorris_core::cli::run(std::env::args_os()));
}
