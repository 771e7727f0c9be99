fn main() {
    std::process::exit(algossip::cli::parse_and_dispatch(std::env::args_os()));
}
