fn main() {
    std::process::exit(orderlab_cli::run(std::env::args_os()));
}
