fn main() {
    std::process::exit(buchberger_rl::cli::run(std::env::args_os()));
}
