fn main() {
    std::process::exit(oblique::cli::main_with(std::env::args_os()));
}
