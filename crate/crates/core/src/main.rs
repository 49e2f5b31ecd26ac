fn main() {
    std::process::exit(gm_series::cli::run());
}
