fn main() {
    std::process::exit(graphalytics::cli::main_with_args(std::env::args_os()));
}
