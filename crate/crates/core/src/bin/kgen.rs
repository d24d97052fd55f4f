fn main() {
    std::process::exit(kgen::cli::main());
}
