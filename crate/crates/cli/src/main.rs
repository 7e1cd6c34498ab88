fn main() {
    std::process::exit(fjordmap_cli::run(std::env::args_os()));
}
