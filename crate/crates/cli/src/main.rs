fn main() {
    std::process::exit(gauge_ideals_cli::cli::run(std::env::args_os()));
}
