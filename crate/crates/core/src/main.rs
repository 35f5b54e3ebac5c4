fn main() {
    std::process::exit(xpchaos::cli::main_with_args(std::env::args_os()));
}
