fn main() {
    std::process::exit(cvqkd_manifold::cli::main_with_args(std::env::args_os()));
}
