fn main() {
    std::process::exit(axisym::cli::run(std::env::args_os()));
}
