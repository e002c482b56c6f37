fn main() {
    std::process::exit(fracspec::cli::run(std::env::args_os()));
}
