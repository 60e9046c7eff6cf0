fn main() {
    std::process::exit(reciplab::cli::run(std::env::args_os()));
}
