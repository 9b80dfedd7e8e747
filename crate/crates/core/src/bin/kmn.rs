fn main() {
    std::process::exit(kmn_sandpile::cli::main_with_std());
}
