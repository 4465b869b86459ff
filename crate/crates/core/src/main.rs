fn main() {
    std::process::exit(cgrep::cli::run(std::env::args_os()));
}
