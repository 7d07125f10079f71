fn main() {
    std::process::exit(sosrank::cli::main());
}
