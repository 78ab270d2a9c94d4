fn main() {
    std::process::exit(qnd::cli::run(std::env::args_os()));
}
