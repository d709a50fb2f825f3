fn main() {
    std::process::exit(ulab_cli::run(std::env::args_os()));
}
