fn main() {
    std::process::exit(frio_cli::run(std::env::args_os()));
}
