fn main() {
    std::process::exit(spinfuse::cli::run(std::env::args_os()));
}
