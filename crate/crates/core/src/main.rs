fn main() {
    std::process::exit(torsqueeze::cli::main_with_args(std::env::args_os()));
}
