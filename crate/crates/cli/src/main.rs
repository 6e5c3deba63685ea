fn main() {
    std::process::exit(heisweil_cli::run(std::env::args_os()));
}
