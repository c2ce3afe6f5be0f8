fn main() {
    std::process::exit(rmatrix::cli::run());
}
