fn main() {
    std::process::exit(csl_lab::cli::run(std::env::args_os()));
}
