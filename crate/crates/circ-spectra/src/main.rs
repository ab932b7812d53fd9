fn main() {
    std::process::exit(circ_spectra::cli::main_with_args(std::env::args_os()));
}
