fn main() {
    std::process::exit(digifix_cli::run(std::env::args_os()));
}
