fn main() {
    std::process::exit(fermat_actions::cli::run(std::env::args_os()));
}
