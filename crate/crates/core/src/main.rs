fn main() {
    std::process::exit(persp360::cli::cli_main(std::env::args_os()));
}
