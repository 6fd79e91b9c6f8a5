fn main() {
    std::process::exit(qnn::cli::run_from(std::env::args_os()));
}
