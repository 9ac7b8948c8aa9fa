fn main() {
    std::process::exit(fgpp_cli::main_entry(std::env::args_os()));
}
