fn main() {
    std::process::exit(perron_trees::cli::run(std::env::args_os()));
}
