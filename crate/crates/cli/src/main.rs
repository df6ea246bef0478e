fn main() {
    std::process::exit(pushpull_cli::main_with_args(std::env::args_os().collect()));
}
