fn main() {
    std::process::exit(itep::cli::run(std::env::args_os()));
}
