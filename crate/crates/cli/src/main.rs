fn main() {
    std::process::exit(kfib_pillai_cli::run(std::env::args_os()));
}
