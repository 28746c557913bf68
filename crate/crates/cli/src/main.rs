fn main() {
    std::process::exit(nhqb_cli::main_with(std::env::args_os()));
}
