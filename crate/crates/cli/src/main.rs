fn main() {
    std::process::exit(idealpoly_cli::run(std::env::args_os()));
}
