fn main() {
    std::process::exit(equilibria::cli::main(std::env::args_os()));
}
