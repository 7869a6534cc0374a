fn main() {
    std::process::exit(bdscore::cli::run());
}
