fn main() {
    std::process::exit(singkam::cli::run(std::env::args_os()));
}
