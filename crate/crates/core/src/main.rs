fn main() {
    std::process::exit(kcone::cli::run_from(std::env::args_os()));
}
