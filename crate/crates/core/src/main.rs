fn main() {
    std::process::exit(rtree_bm::cli::run(std::env::args_os()));
}
