fn main() {
    std::process::exit(cframe_cli::run());
}
