fn main() {
    std::process::exit(splitstep::cli::run());
}
