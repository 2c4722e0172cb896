fn main() {
    std::process::exit(symdiam::cli::run(std::env::args_os()));
}
