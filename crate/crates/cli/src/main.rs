fn main() {
    std::process::exit(ncdga_cli::main_with(std::env::args()));
}
