fn main() {
    std::process::exit(origami_selffold::io::cli::run(std::env::args_os()));
}
