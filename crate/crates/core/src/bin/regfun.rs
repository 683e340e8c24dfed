fn main() {
    std::process::exit(regfun::cli::main_with_args(std::env::args_os()));
}
