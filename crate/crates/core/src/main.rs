fn main() {
    std::process::exit(halfsplit::cli::run_from_env());
}
