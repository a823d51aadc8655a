fn main() {
    std::process::exit(hamlift::cli::main_with_args(std::env::args_os()));
}
