fn main() {
    std::process::exit(arrfactor::cli::run());
}
