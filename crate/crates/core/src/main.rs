fn main() {
    std::process::exit(padic_closure::cli::run(std::env::args_os()));
}
