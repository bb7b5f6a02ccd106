fn main() {
    std::process::exit(nmat_core::cli::run(std::env::args_os()));
}
