fn main() {
    std::process::exit(skewcircle::cli::run(std::env::args_os()));
}
