fn main() {
    std::process::exit(roughscat_cli::run(std::env::args_os()));
}
