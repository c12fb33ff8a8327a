fn main() {
    std::process::exit(ecgscrub::cli::main_with(std::env::args_os()));
}
