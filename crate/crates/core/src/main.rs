fn main() {
    std::process::exit(tilelift::cli::run_command(std::env::args_os()));
}
