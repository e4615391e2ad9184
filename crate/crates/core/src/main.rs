fn main() {
    std::process::exit(stefan_core::cli::run(std::env::args_os()));
}
