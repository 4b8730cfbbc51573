fn main() {
    std::process::exit(paffine::cli::run_from_args());
}
