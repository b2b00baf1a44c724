fn main() {
    std::process::exit(pcf::cli::main_with(std::env::args()));
}
