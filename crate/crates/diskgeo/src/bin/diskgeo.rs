fn main() {
    std::process::exit(diskgeo::cli::run(std::env::args()));
}
