fn main() {
    std::process::exit(ilz::cli::run(std::env::args_os()));
}
