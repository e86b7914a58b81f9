fn main() {
    std::process::exit(dose::cli::run());
}
