fn main() {
    std::process::exit(foon::cli::run(std::env::args_os()));
}
