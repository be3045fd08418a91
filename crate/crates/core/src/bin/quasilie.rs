fn main() {
    std::process::exit(quasilie::cli::main());
}
