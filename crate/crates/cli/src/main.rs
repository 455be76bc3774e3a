fn main() {
    std::process::exit(hlsext_cli::run(std::env::args_os()));
}
