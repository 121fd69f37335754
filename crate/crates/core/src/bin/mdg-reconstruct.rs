fn main() {
    std::process::exit(mdg_reconstruct::cli::run(std::env::args_os()));
}
