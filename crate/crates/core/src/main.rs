fn main() {
    std::process::exit(heiskern::cli::run(std::env::args_os()));
}
