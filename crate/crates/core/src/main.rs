fn main() {
    std::process::exit(design_forge::cli::run(std::env::args_os()));
}
