fn main() {
    std::process::exit(dirichlet_arg::cli::run(std::env::args_os()));
}
