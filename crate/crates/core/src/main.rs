fn main() {
    std::process::exit(circle_envelopes::cli::main_with_args(std::env::args_os()));
}
