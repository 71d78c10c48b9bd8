fn main() {
    std::process::exit(aggreason_cli::main_with(std::env::args_os()));
}
