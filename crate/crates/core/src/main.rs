fn main() {
    std::process::exit(wendland_kit::cli::run(std::env::args_os()));
}
