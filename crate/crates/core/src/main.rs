fn main() {
    std::process::exit(helix_spectra::cli::run(std::env::args_os()));
}
