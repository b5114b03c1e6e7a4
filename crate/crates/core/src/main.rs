fn main() {
    std::process::exit(tlms::cli::cli_main(std::env::args_os()));
}
