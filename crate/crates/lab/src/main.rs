fn main() {
    std::process::exit(effectus_lab::cli::run(std::env::args_os()));
}
