fn main() {
    std::process::exit(procsim_cli::run(std::env::args_os()));
}
